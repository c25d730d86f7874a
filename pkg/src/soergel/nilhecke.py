"""The smash product of the localised polynomial ring with the Weyl group,
Demazure elements, and equivariant multiplicities.

An element is a finite map from group elements to rational functions (the
coefficients on the group basis); multiplication twists the right factor by
the left group element.  The coefficient of a group element x in the product
over a reduced word for y is the equivariant multiplicity e(x, y):
homogeneous of degree -2*len(y) and supported on x <= y.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NonReducedWord
from .polynomial import Poly, RatFunc


class NilHeckeElement:
    """Finite Q-linear combination of group-basis symbols."""

    __slots__ = ("group", "coords")

    def __init__(self, group, coords=None):
        self.group = group
        clean = {}
        if coords:
            for w, f in coords.items():
                if not isinstance(f, RatFunc):
                    f = RatFunc.from_poly(f) if isinstance(f, Poly) else \
                        RatFunc(Poly.constant(group.rank, f))
                if f:
                    clean[w] = f
        self.coords = clean

    def __eq__(self, other):
        return isinstance(other, NilHeckeElement) and self.coords == other.coords

    def __bool__(self):
        return bool(self.coords)

    def __add__(self, other):
        out = dict(self.coords)
        for w, f in other.coords.items():
            g = out.get(w)
            s = f if g is None else g + f
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NilHeckeElement(self.group, out)

    def __neg__(self):
        return NilHeckeElement(self.group, {w: -f for w, f in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """(f d_x)(g d_y) = f * x(g) d_{xy}."""
        if isinstance(other, (RatFunc, Poly, int, Fraction)):
            return NilHeckeElement(self.group, {w: f * other for w, f in self.coords.items()})
        out = {}
        for x, f in self.coords.items():
            for y, g in other.coords.items():
                xy = x * y
                term = f * self.group.act_ratfunc(x, g)
                acc = out.get(xy)
                s = term if acc is None else acc + term
                if s:
                    out[xy] = s
                else:
                    out.pop(xy, None)
        return NilHeckeElement(self.group, out)

    def __rmul__(self, other):
        # left multiplication by a scalar/function: f * (g d_y) = (f g) d_y
        if isinstance(other, (RatFunc, Poly, int, Fraction)):
            return NilHeckeElement(self.group, {w: other * f for w, f in self.coords.items()})
        return NotImplemented

    def coefficient(self, w):
        return self.coords.get(w, RatFunc.zero(self.group.rank))

    def apply_to(self, f):
        """Natural action on functions: (g d_x) . f = g * x(f)."""
        out = RatFunc.zero(self.group.rank)
        if isinstance(f, Poly):
            f = RatFunc.from_poly(f)
        for x, g in self.coords.items():
            out = out + g * self.group.act_ratfunc(x, f)
        return out

    def __repr__(self):
        names = self.group.realisation.gen_names
        parts = [f"({f.text(names)}) d_{w.name}" for w, f in sorted(
            self.coords.items(), key=lambda kv: (kv[0].length, kv[0].word))]
        return " + ".join(parts) if parts else "0"


class NilHecke:
    """Demazure elements and equivariant multiplicities for a finite group."""

    def __init__(self, group):
        self.group = group
        self._d_cache = {}

    def delta(self, w, f=None):
        f = RatFunc.one(self.group.rank) if f is None else f
        return NilHeckeElement(self.group, {w: f})

    def demazure(self, i):
        """(1/alpha_i)(d_id - d_{s_i})."""
        g = self.group
        inv_alpha = RatFunc(Poly.one(g.rank), [tuple(int(a == i) for a in range(g.rank))])
        return NilHeckeElement(g, {g.identity: inv_alpha, g.simple(i): -inv_alpha})

    def product_over_word(self, word):
        """Product of Demazure elements; zero whenever the word is not reduced."""
        out = self.delta(self.group.identity)
        for i in word:
            out = out * self.demazure(i)
        return out

    def d_element(self, w):
        """The product over (any) reduced word of w; braid-independent."""
        el = self._d_cache.get(w)
        if el is None:
            el = self.product_over_word(self.group.reduced_word(w))
            self._d_cache[w] = el
        return el

    def equivariant_multiplicity(self, x, word):
        """Coefficient of x in the product over a reduced word."""
        word = tuple(word)
        if not self.group.is_reduced(word):
            raise NonReducedWord(f"word {word} is not reduced")
        return self.d_element(self.group.element_from_word(word)).coefficient(x)

    def table(self):
        """All (x, y, e(x, y)) over comparable pairs x <= y."""
        rows = []
        for y in self.group.elements:
            d = self.d_element(y)
            for x in self.group.elements:
                if self.group.bruhat_leq(x, y):
                    rows.append((x, y, d.coefficient(x)))
        return rows

    def diagonal_closed_form(self, y):
        """(-1)^len(y) over the product of left inversion roots of y."""
        g = self.group
        roots = [root for _, root in g.left_inversion_reflections(y)]
        num = Poly.constant(g.rank, (-1) ** g.length_of(y))
        return RatFunc(num, roots)

    def characterization_report(self, x, word, lambdas=None):
        """Check support, the diagonal closed form, and the deletion identity.

        The deletion identity is run for each supplied degree-2 element
        (defaults: every simple root and rho), summing over positions whose
        deletion leaves a reduced word.  Returns a dict whose ``violations``
        list must be empty.
        """
        g = self.group
        word = tuple(word)
        if not g.is_reduced(word):
            raise NonReducedWord(f"word {word} is not reduced")
        y = g.element_from_word(word)
        d = self.d_element(y)
        violations = []

        for w_el, f in d.coords.items():
            if f and not g.bruhat_leq(w_el, y):
                violations.append(("support", w_el.name))

        if self.d_element(y).coefficient(y) != self.diagonal_closed_form(y):
            violations.append(("diagonal", y.name))

        if lambdas is None:
            lambdas = [Poly.generator(g.rank, i) for i in range(g.rank)]
            lambdas.append(Poly.linear(g.realisation.rho()))
        e_xy = d.coefficient(x)
        m = len(word)
        for lam_index, lam in enumerate(lambdas):
            lhs = (RatFunc.from_poly(g.act_poly(x, lam) - g.act_poly(y, lam))) * e_xy
            rhs = RatFunc.zero(g.rank)
            for i in range(m):
                deleted = word[:i] + word[i + 1:]
                if not g.is_reduced(deleted):
                    continue
                suffix = g.element_from_word(word[i + 1:])
                coeff = g.realisation.pair_with_coroot(
                    suffix.apply_to_coords(lam.linear_coords()), word[i])
                if coeff:
                    sub = self.d_element(g.element_from_word(deleted)).coefficient(x)
                    rhs = rhs + RatFunc(Poly.constant(g.rank, coeff)) * sub
            if lhs != rhs:
                violations.append(("deletion", lam_index))

        return {"x": x, "y": y, "violations": violations}

    def positivity_scan(self, coweight):
        """Sign table of (-1)^len(x) sigma(e(x, y)) over all comparable pairs.

        Returns rows (x, y, value, sigma coefficient, sign) plus the pairs
        whose entry vanishes (hard-Lefschetz failure witnesses) and the pairs
        with a negative entry.  For a dominant regular coweight both lists
        are expected to be empty.
        """
        g = self.group
        rows = []
        zeros = []
        negatives = []
        for x, y, e in self.table():
            coeff, _ = e.sigma_monomial(coweight)
            signed = coeff * (-1) ** g.length_of(x)
            sign = (signed > 0) - (signed < 0)
            rows.append((x, y, e, signed, sign))
            if sign == 0:
                zeros.append((x, y))
            elif sign < 0:
                negatives.append((x, y))
        return {"rows": rows, "zeros": zeros, "negatives": negatives,
                "clean": not zeros and not negatives}
