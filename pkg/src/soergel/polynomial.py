"""Exact graded polynomial and rational-function arithmetic.

The ground field is Q via ``fractions.Fraction``.  ``Poly`` is a multivariate
polynomial in the simple-root generators, graded with every generator in
degree 2.  ``RatFunc`` keeps its denominator as an explicit multiset of
positive roots (never expanded), so results stay in root-factored form and
serialise canonically.  ``UniPoly`` is a one-variable polynomial used both for
specialisations along a coweight line and for exact Sturm root counting.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import DenominatorVanishes, ZeroPolynomial


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _grlex_key(expo):
    return (sum(expo), expo)


def monomials_of(nvars, total):
    """All exponent tuples with the given total, in descending grlex order."""
    if nvars == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total, -1, -1):
        for rest in monomials_of(nvars - 1, total - first):
            out.append((first,) + rest)
    return out


class Poly:
    """Multivariate polynomial over Q; generators have graded degree 2."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for expo, c in terms.items():
                c = _frac(c)
                if c:
                    expo = tuple(expo)
                    if len(expo) != nvars:
                        raise ValueError("exponent arity mismatch")
                    clean[expo] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: _frac(c)})

    @classmethod
    def one(cls, nvars):
        return cls.constant(nvars, 1)

    @classmethod
    def generator(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coeffs):
        """Degree-2 element with the given coordinates in the generators."""
        coeffs = list(coeffs)
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = _frac(c)
        return cls(n, terms)

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_homogeneous(self):
        totals = {sum(e) for e in self.terms}
        return len(totals) <= 1

    def degree(self):
        """Graded degree (2x the total exponent); zero polynomial is an error."""
        if not self.terms:
            raise ValueError("degree of zero polynomial")
        totals = {sum(e) for e in self.terms}
        if len(totals) != 1:
            raise ValueError("polynomial is not homogeneous")
        return 2 * totals.pop()

    def max_degree(self):
        return 2 * max((sum(e) for e in self.terms), default=0)

    def linear_coords(self):
        """Coordinate vector of a homogeneous degree-2 element."""
        coords = [Fraction(0)] * self.nvars
        for e, c in self.terms.items():
            if sum(e) != 1:
                raise ValueError("not a degree-2 element")
            coords[e.index(1)] = c
        return tuple(coords)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if set(self.terms) == {(0,) * self.nvars}:
            return self.terms[(0,) * self.nvars]
        raise ValueError("not a constant")

    # -- arithmetic --------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        if not isinstance(other, Poly):
            c = _frac(other)
            return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly.one(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def leading_exponent(self):
        return max(self.terms, key=_grlex_key)

    def divide_exact(self, divisor):
        """Exact quotient self / divisor, or None when the division fails."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return Poly.zero(self.nvars)
        dlead = divisor.leading_exponent()
        dcoef = divisor.terms[dlead]
        rem = dict(self.terms)
        out = {}
        while rem:
            lead = max(rem, key=_grlex_key)
            q = tuple(a - b for a, b in zip(lead, dlead))
            if any(x < 0 for x in q):
                return None
            c = rem[lead] / dcoef
            out[q] = out.get(q, Fraction(0)) + c
            for e2, c2 in divisor.terms.items():
                e = tuple(a + b for a, b in zip(q, e2))
                v = rem.get(e, Fraction(0)) - c * c2
                if v:
                    rem[e] = v
                else:
                    rem.pop(e, None)
        return Poly(self.nvars, out)

    def substitute_linear(self, images):
        """Ring map sending generator i to the degree-2 element images[i]."""
        out = Poly.zero(self.nvars)
        powers = [[Poly.one(self.nvars)] for _ in range(self.nvars)]
        for e, c in self.terms.items():
            term = Poly.constant(self.nvars, c)
            for i, k in enumerate(e):
                while len(powers[i]) <= k:
                    powers[i].append(powers[i][-1] * images[i])
                term = term * powers[i][k]
            out = out + term
        return out

    def sigma(self, coweight):
        """Restriction to the coweight line: generator i maps to coweight[i]*z."""
        coweight = [_frac(c) for c in coweight]
        coeffs = {}
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                v *= coweight[i] ** k
            t = sum(e)
            coeffs[t] = coeffs.get(t, Fraction(0)) + v
        top = max(coeffs, default=-1)
        return UniPoly([coeffs.get(k, Fraction(0)) for k in range(top + 1)])

    # -- canonical text ----------------------------------------------------

    def text(self, names):
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append(f"{names[i]}^{k}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            pieces.append((c < 0, body))
        first_neg, first_body = pieces[0]
        s = ("-" if first_neg else "") + first_body
        for neg, body in pieces[1:]:
            s += (" - " if neg else " + ") + body
        return s

    def __repr__(self):
        return f"Poly({self.text([f'x{i}' for i in range(self.nvars)])})"


def root_key(coords):
    """Canonical sort key for a positive root: height, then declared order."""
    coords = tuple(coords)
    return (sum(coords), tuple(-c for c in coords))


def _root_poly(nvars, coords):
    return Poly.linear(list(coords) + [0] * (nvars - len(coords)))


class RatFunc:
    """Fraction with polynomial numerator and a multiset of roots below.

    Denominator factors are stored as coordinate tuples of positive roots and
    are cancelled eagerly against the numerator by exact division, so equal
    values have identical representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=()):
        den = [tuple(int(c) for c in r) for r in den]
        if num.is_zero():
            den = []
        else:
            remaining = []
            for r in sorted(set(map(tuple, den)), key=root_key):
                mult = den.count(r)
                rp = _root_poly(num.nvars, r)
                while mult:
                    q = num.divide_exact(rp)
                    if q is None:
                        break
                    num = q
                    mult -= 1
                remaining.extend([r] * mult)
            den = remaining
        self.num = num
        self.den = tuple(sorted(den, key=root_key))

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    @classmethod
    def zero(cls, nvars):
        return cls(Poly.zero(nvars))

    @classmethod
    def one(cls, nvars):
        return cls(Poly.one(nvars))

    @property
    def nvars(self):
        return self.num.nvars

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def den_poly(self):
        p = Poly.one(self.nvars)
        for r in self.den:
            p = p * _root_poly(self.nvars, r)
        return p

    def is_polynomial(self):
        return not self.den

    def as_poly(self):
        if self.den:
            raise ValueError("not a polynomial")
        return self.num

    def degree(self):
        return self.num.degree() - 2 * len(self.den)

    def is_homogeneous(self):
        return self.num.is_homogeneous()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        return RatFunc(Poly.constant(self.nvars, other))

    def __eq__(self, other):
        other = self._coerce(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        union = {}
        for r in set(self.den) | set(other.den):
            union[r] = max(self.den.count(r), other.den.count(r))
        def complement(den):
            extra = []
            for r, m in union.items():
                extra.extend([r] * (m - den.count(r)))
            return extra
        n1 = self.num
        for r in complement(self.den):
            n1 = n1 * _root_poly(self.nvars, r)
        n2 = other.num
        for r in complement(other.den):
            n2 = n2 * _root_poly(self.nvars, r)
        full = [r for r, m in union.items() for _ in range(m)]
        return RatFunc(n1 + n2, full)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, Poly):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return RatFunc(self.num * other, self.den)
        return RatFunc(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def div_root(self, coords, sign=1):
        """Divide by sign * (positive root)."""
        num = self.num if sign > 0 else -self.num
        return RatFunc(num, self.den + (tuple(coords),))

    def div_exact(self, other):
        """Exact quotient self / other.

        Valid whenever other.num divides self.num * other.den exactly, which
        covers Bareiss eliminations and division by units of the localised
        ring (rational multiples of root products).
        """
        n = self.num
        for r in other.den:
            n = n * _root_poly(self.nvars, r)
        q = n.divide_exact(other.num)
        if q is None:
            raise ZeroDivisionError("inexact rational-function division")
        return RatFunc(q, self.den)

    def cross_equal(self, other):
        """Equality by cross multiplication (independent of normal form)."""
        return (self.num * other.den_poly()) == (other.num * self.den_poly())

    def sigma_monomial(self, coweight):
        """Specialise a homogeneous value to (coefficient, z-exponent)."""
        coweight = [_frac(c) for c in coweight]
        dcoef = Fraction(1)
        for r in self.den:
            v = sum(c * w for c, w in zip(r, coweight))
            if v == 0:
                raise DenominatorVanishes(r)
            dcoef *= v
        if self.num.is_zero():
            return Fraction(0), 0
        if not self.num.is_homogeneous():
            raise ValueError("sigma of a non-homogeneous value")
        npoly = self.num.sigma(coweight)
        k = self.num.degree() // 2
        return npoly.coeffs[k] / dcoef if k < len(npoly.coeffs) else Fraction(0), k - len(self.den)

    def text(self, names):
        if not self.den:
            return self.num.text(names)
        num = self.num.text(names)
        if len(self.num.terms) > 1:
            num = f"({num})"
        factors = []
        for r in self.den:
            t = _root_poly(self.nvars, r).text(names)
            factors.append(f"({t})" if len([c for c in r if c]) > 1 else t)
        return f"{num} / ({' * '.join(factors)})"

    def __repr__(self):
        return f"RatFunc({self.text([f'x{i}' for i in range(self.nvars)])})"


class UniPoly:
    """Dense one-variable polynomial over Q; the variable sits in degree 2."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = [_frac(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls((1,))

    @classmethod
    def monomial(cls, c, k):
        return cls((0,) * k + (_frac(c),))

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def deg(self):
        return len(self.coeffs) - 1

    def leading(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly((other,))
        a, b = self.coeffs, other.coeffs
        return UniPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                        for i in range(max(len(a), len(b)))])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly((other,))
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = _frac(other)
            return UniPoly([c * v for v in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        d = len(other.coeffs) - 1
        lead = other.coeffs[-1]
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            c = rem[-1] / lead
            q[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
        return UniPoly(q), UniPoly(rem)

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ZeroDivisionError("inexact polynomial division")
        return q

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        x = _frac(x)
        v = Fraction(0)
        for c in reversed(self.coeffs):
            v = v * x + c
        return v

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return UniPoly([c / lead for c in self.coeffs])

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, divmod(a, b)[1]
        return a.monic() if not a.is_zero() else a

    def squarefree_part(self):
        if self.deg() <= 0:
            return self
        g = self.gcd(self.derivative())
        if g.deg() <= 0:
            return self
        return self.exact_div(g)

    def valuation(self):
        """Order of vanishing at 0; None for the zero polynomial."""
        if self.is_zero():
            return None
        return next(i for i, c in enumerate(self.coeffs) if c != 0)

    def shift_down(self, k):
        """Exact division by the k-th power of the variable."""
        if self.is_zero():
            return self
        if any(c != 0 for c in self.coeffs[:k]):
            raise ZeroDivisionError("valuation too small")
        return UniPoly(self.coeffs[k:])

    def is_monomial(self):
        return sum(1 for c in self.coeffs if c) <= 1

    def text(self, name="z"):
        if self.is_zero():
            return "0"
        pieces = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                body = str(abs(c))
            else:
                var = name if k == 1 else f"{name}^{k}"
                body = var if abs(c) == 1 else f"{abs(c)}*{var}"
            pieces.append((c < 0, body))
        s = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            s += (" - " if neg else " + ") + body
        return s

    def __repr__(self):
        return f"UniPoly({self.text()})"


def _sign_variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def _sign(x):
    return (x > 0) - (x < 0)


def sturm_chain(p):
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-divmod(chain[-2], chain[-1])[1])
    chain.pop()
    return chain


def sturm_roots_in_interval(p, lo=None, hi=None):
    """Number of distinct real roots of p in the open interval (lo, hi).

    ``None`` endpoints mean -infinity / +infinity.  Exact throughout.
    """
    if not isinstance(p, UniPoly):
        raise TypeError("expected a UniPoly")
    if p.is_zero():
        raise ZeroPolynomial("root counting on the zero polynomial")
    q = p.squarefree_part()
    for endpoint in (lo, hi):
        if endpoint is not None:
            x = _frac(endpoint)
            while not q.is_zero() and q.deg() >= 1 and q.eval(x) == 0:
                q = q.exact_div(UniPoly((-x, 1)))
    if q.deg() <= 0:
        return 0
    chain = sturm_chain(q)

    def variations_at(point, at_infinity_sign=None):
        signs = []
        for f in chain:
            if at_infinity_sign is not None:
                s = _sign(f.leading())
                if at_infinity_sign < 0 and f.deg() % 2 == 1:
                    s = -s
                signs.append(s)
            else:
                signs.append(_sign(f.eval(point)))
        return _sign_variations(signs)

    v_lo = variations_at(None, -1) if lo is None else variations_at(_frac(lo))
    v_hi = variations_at(None, 1) if hi is None else variations_at(_frac(hi))
    return v_lo - v_hi


def cauchy_root_bound(p):
    """A rational upper bound on all real roots of p."""
    if p.is_zero() or p.deg() <= 0:
        return Fraction(0)
    lead = abs(p.leading())
    m = max(abs(c) for c in p.coeffs[:-1])
    return Fraction(1) + m / lead
