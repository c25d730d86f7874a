"""Shapovalov forms on universal Verma weight spaces for sl_n, and Jantzen
filtration layers along a deformation direction.

The universal Verma module has highest-weight coefficients in the polynomial
ring on the Cartan subalgebra.  On the weight space cut out by a drop nu the
contravariant form is a symmetric matrix of Cartan polynomials over the
ordered monomial basis in negative root vectors; entries are computed by
commutator reduction against the transpose antiautomorphism.  Specialising
the Cartan coordinates to (weight + z * direction) gives a matrix over Q[z]
whose elementary-divisor z-orders are the layer data of the filtration by
order of vanishing of the form.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .coxeter import CoxeterGroup
from .errors import DimensionBound, SingularSpecialization
from .polynomial import Poly, UniPoly


class SlnRootData:
    """Type A_{n-1} root data in simple-root coordinates."""

    def __init__(self, n):
        self.n = n
        self.rank = n - 1
        self.group = CoxeterGroup(f"A{n - 1}")
        # positive roots (i, j) with 0 <= i < j < n mean e_i - e_j
        self.positive_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def pair_to_coords(self, pair):
        i, j = pair
        return tuple(1 if i <= a < j else 0 for a in range(self.rank))

    def coords_to_pair(self, coords):
        for pair in self.positive_pairs:
            if self.pair_to_coords(pair) == tuple(coords):
                return pair
        raise ValueError("not a positive root")

    def height(self, pair):
        return pair[1] - pair[0]

    def rho(self):
        return self.group.realisation.rho()

    def dot_action(self, w, lam):
        """w . lam = w(lam + rho) - rho, in simple-root coordinates."""
        rho = self.rho()
        shifted = tuple(Fraction(a) + b for a, b in zip(lam, rho))
        moved = w.apply_to_coords(shifted)
        return tuple(a - b for a, b in zip(moved, rho))

    def coroot_values(self, lam):
        """Values of a weight on the simple coroots."""
        return tuple(self.group.realisation.pair_with_coroot(lam, b)
                     for b in range(self.rank))

    def gamma_regular(self, gamma_values):
        """Is a direction (given by simple-coroot values) regular?"""
        for pair in self.positive_pairs:
            coords = self.pair_to_coords(pair)
            if sum(Fraction(c) * g for c, g in zip(coords, gamma_values)) == 0:
                return False
        return True


def kostant_dimension(nu, root_data):
    """Number of multisets of positive roots summing to nu."""
    roots = [root_data.pair_to_coords(p) for p in sorted(
        root_data.positive_pairs, key=lambda p: (root_data.height(p), p))]

    @lru_cache(maxsize=None)
    def count(remaining, k):
        if all(c == 0 for c in remaining):
            return 1
        if k == len(roots):
            return 0
        root = roots[k]
        total = 0
        m = 0
        cur = remaining
        while all(c >= 0 for c in cur):
            total += count(cur, k + 1)
            cur = tuple(a - b for a, b in zip(cur, root))
            m += 1
        return total

    return count(tuple(int(c) for c in nu), 0)


def pbw_basis(nu, root_data):
    """Ordered monomials in negative root vectors with weight drop nu.

    Roots are ordered by height then position; a monomial is the sorted
    tuple of its root factors (with multiplicity).
    """
    order = sorted(root_data.positive_pairs,
                   key=lambda p: (root_data.height(p), p))
    out = []

    def rec(remaining, k, acc):
        if all(c == 0 for c in remaining):
            out.append(tuple(acc))
            return
        if k == len(order):
            return
        root = order[k]
        coords = root_data.pair_to_coords(root)
        cur = remaining
        mult = 0
        stack = []
        while all(c >= 0 for c in cur):
            stack.append((cur, mult))
            cur = tuple(a - b for a, b in zip(cur, coords))
            mult += 1
        for cur, mult in stack:
            rec(cur, k + 1, acc + [root] * mult)

    rec(tuple(int(c) for c in nu), 0, [])
    out.sort(reverse=True)
    return out


# ---------------------------------------------------------------------------
# the enveloping-algebra calculus
#
# Negative root vectors are the matrix units E_{j i} for a pair (i, j); we
# manipulate states sum_M c_M * (M . v) where M runs over ordered monomials
# and the coefficients live in the Cartan polynomial ring.
# ---------------------------------------------------------------------------

def _root_order_key(root_data):
    def key(pair):
        return (root_data.height(pair), pair)
    return key


def _neg_commutator(p1, p2):
    """[F_{p1}, F_{p2}] as (sign, pair) or None; stays in the negative part."""
    (i1, j1), (i2, j2) = p1, p2
    # F_{(i,j)} = E_{j i}; [E_{j1 i1}, E_{j2 i2}]
    out = []
    if i1 == j2:
        out.append((1, (i2, j1)))
    if i2 == j1:
        out.append((-1, (i1, j2)))
    if len(out) == 2:
        return None  # would be a Cartan element; cannot happen for two negatives
    return out[0] if out else None


class ShapovalovBuilder:
    def __init__(self, root_data):
        self.rd = root_data
        self.nvars = root_data.rank
        self.key = _root_order_key(root_data)

    def _zero(self):
        return {}

    def _add(self, state, mono, coeff):
        if coeff.is_zero():
            return
        cur = state.get(mono)
        s = coeff if cur is None else cur + coeff
        if s:
            state[mono] = s
        else:
            state.pop(mono, None)

    def lower(self, pair, state):
        """Left multiplication by a negative root vector, normal-ordered."""
        out = self._zero()
        for mono, coeff in state.items():
            for m2, c2 in self._insert(pair, mono).items():
                self._add(out, m2, coeff * c2)
        return out

    def _insert(self, pair, mono):
        """Normal-order F_pair * mono into the sorted basis; integer coeffs.

        Commutators of negative root vectors only ever produce taller
        negative roots, so prepending the original head keeps the order.
        """
        key = self.key
        if not mono or key(pair) <= key(mono[0]):
            return {(pair,) + mono: 1}
        head, rest = mono[0], mono[1:]
        out = {}
        for m2, c2 in self._insert(pair, rest).items():
            m = (head,) + m2
            out[m] = out.get(m, 0) + c2
        comm = _neg_commutator(pair, head)
        if comm is not None:
            sign, newpair = comm
            for m2, c2 in self._insert(newpair, rest).items():
                out[m2] = out.get(m2, 0) + sign * c2
        return {m: c for m, c in out.items() if c}

    def _cartan_poly(self, i, j):
        """E_ii - E_jj as a Cartan polynomial (universal coordinates)."""
        coeffs = [0] * self.nvars
        for k in range(i, j):
            coeffs[k] = 1
        return Poly.linear(coeffs)

    def _root_pairing(self, root_pair, i, j):
        """Value of the root e_a - e_b on the coroot part E_ii - E_jj."""
        a, b = root_pair
        def delta(x):
            return (1 if x == a else 0) - (1 if x == b else 0)
        return delta(i) - delta(j)

    def cartan(self, i, j, state):
        """Left multiplication by E_ii - E_jj on highest-weight states."""
        out = self._zero()
        for mono, coeff in state.items():
            total = self._cartan_poly(i, j)
            for pair in mono:
                total = total - self._root_pairing(pair, i, j)
            self._add(out, mono, coeff * total)
        return out

    def raise_(self, pair, state):
        """Left multiplication by the positive root vector of a pair."""
        out = self._zero()
        for mono, coeff in state.items():
            for m2, c2 in self._raise_mono(pair, mono).items():
                self._add(out, m2, coeff * c2)
        return out

    def _raise_mono(self, pair, mono):
        """E_{i j} applied to an ordered negative monomial acting on the
        highest-weight vector; recursion commutes the raiser to the right,
        where it annihilates the vector."""
        i, j = pair  # E_{i j}, i < j
        if not mono:
            return {}
        head, rest = mono[0], mono[1:]
        (k, l) = head  # F_head = E_{l k}, l > k
        out = {}
        # E_{ij} E_{lk} = E_{lk} E_{ij} + delta_{jl} E_{ik} - delta_{ki} E_{lj}
        tail = self._raise_mono(pair, rest)
        for m2, c2 in tail.items():
            for m3, c3 in self._insert(head, m2).items():
                cur = out.get(m3)
                v = c2 * c3 if cur is None else cur + c2 * c3
                if v:
                    out[m3] = v
                else:
                    out.pop(m3, None)
        def accumulate(state):
            for m2, c2 in state.items():
                cur = out.get(m2)
                v = c2 if cur is None else cur + c2
                if v:
                    out[m2] = v
                else:
                    out.pop(m2, None)
        if j == l and k == i:
            # full Cartan commutator
            accumulate(self.cartan(i, j, {rest: Poly.one(self.nvars)}))
        else:
            if j == l:
                # E_{ik}: raising if i < k, lowering if i > k
                if i < k:
                    accumulate(self._raise_mono((i, k), rest))
                elif i > k:
                    accumulate(self.lower((k, i), {rest: Poly.one(self.nvars)}))
            if k == i:
                # -E_{lj}: lowering if l > j, raising if l < j
                if l > j:
                    state = self.lower((j, l), {rest: Poly.one(self.nvars)})
                    accumulate({m: -c for m, c in state.items()})
                elif l < j:
                    state = self._raise_mono((l, j), rest)
                    accumulate({m: -c for m, c in state.items()})
        return out


def shapovalov_universal(nu, root_data, bound=60):
    """Gram matrix of the contravariant form on the weight space of drop nu,
    with entries in the Cartan polynomial ring."""
    basis = pbw_basis(nu, root_data)
    dim = len(basis)
    if dim > bound:
        raise DimensionBound(f"weight space dimension {dim} exceeds {bound}")
    builder = ShapovalovBuilder(root_data)
    # F_B . v as normal-ordered states
    states = []
    for mono in basis:
        st = {(): Poly.one(root_data.rank)}
        for pair in reversed(mono):
            st = builder.lower(pair, st)
        states.append(st)
    matrix = [[None] * dim for _ in range(dim)]
    for a, mono in enumerate(basis):
        for b in range(dim):
            st = states[b]
            # omega(F_A) = product of transposed factors, applied first-first
            for pair in mono:
                st = builder.raise_(pair, st)
                if not st:
                    break
            val = st.get((), Poly.zero(root_data.rank))
            matrix[a][b] = val
    for a in range(dim):
        for b in range(dim):
            if matrix[a][b] != matrix[b][a]:
                raise AssertionError("Shapovalov matrix is not symmetric")
    return {"basis": basis, "matrix": matrix, "nu": tuple(int(c) for c in nu)}


def specialize_matrix(shap, lam_values, gamma_values):
    """Substitute Cartan coordinate k by lam[k] + z gamma[k]."""
    rank = len(lam_values)
    images = [UniPoly((Fraction(lam_values[k]), Fraction(gamma_values[k])))
              for k in range(rank)]
    out = []
    for row in shap["matrix"]:
        new_row = []
        for p in row:
            val = UniPoly.zero()
            for expo, c in p.terms.items():
                term = UniPoly((c,))
                for k, e in enumerate(expo):
                    for _ in range(e):
                        term = term * images[k]
                val = val + term
            new_row.append(val)
        out.append(new_row)
    return out


def smith_z_valuations(zmatrix, max_val=None):
    """z-orders of the elementary divisors of a square matrix over Q[z].

    Computed by truncated module ranks: the dimension of the cokernel of the
    matrix modulo z^k equals the sum of min(order, k) over the elementary
    divisors, so successive differences count divisors of order >= k.  This
    needs only small rational rank computations and avoids the coefficient
    blowup of Euclidean diagonalisation.  Raises if the matrix is singular.
    """
    n = len(zmatrix)
    if n == 0:
        return []
    maxdeg = max((p.deg() for row in zmatrix for p in row if not p.is_zero()),
                 default=0)
    bound = n * maxdeg + 1 if max_val is None else max_val

    def cokernel_dim(k):
        rows = []
        for c in range(n):
            col = [zmatrix[r][c] for r in range(n)]
            for j in range(k):
                vec = []
                for r in range(n):
                    coeffs = list(col[r].coeffs)
                    slot = [Fraction(0)] * k
                    for dpow, coeff in enumerate(coeffs):
                        if dpow + j < k:
                            slot[dpow + j] = coeff
                    vec.extend(slot)
                rows.append(vec)
        return n * k - linalg.rank(rows)

    counts = []  # counts[k-1] = number of divisors with order >= k
    prev = 0
    k = 1
    while True:
        cur = cokernel_dim(k)
        c_k = cur - prev
        if c_k == 0:
            break
        counts.append(c_k)
        prev = cur
        k += 1
        if k > bound:
            raise SingularSpecialization("specialised form is singular")
    vals = [sum(1 for c in counts if c > i) for i in range(n)]
    return sorted(vals)


def jantzen_layers(zmatrix):
    """Layer dimensions by order of vanishing: layer i collects the
    elementary divisors of z-order exactly i."""
    vals = smith_z_valuations(zmatrix)
    top = max(vals) if vals else 0
    layers = [sum(1 for v in vals if v == i) for i in range(top + 1)]
    return {"valuations": vals, "layers": layers}


def jantzen_report(n, w_word, nu, gamma_values=None, bound=60):
    """End-to-end run: highest weight w . 0 for a word in the Weyl group,
    drop nu in simple-root coordinates, direction by simple-coroot values
    (default: the half-sum direction, all ones)."""
    rd = SlnRootData(n)
    w = rd.group.element_from_word(w_word)
    lam = rd.dot_action(w, (Fraction(0),) * rd.rank)
    if gamma_values is None:
        gamma_values = (Fraction(1),) * rd.rank
    if not rd.gamma_regular(gamma_values):
        raise SingularSpecialization("direction vanishes on a coroot")
    shap = shapovalov_universal(nu, rd, bound=bound)
    lam_values = rd.coroot_values(lam)
    zmat = specialize_matrix(shap, lam_values, gamma_values)
    result = jantzen_layers(zmat)
    result.update({"dim": len(shap["basis"]),
                   "weight_coroot_values": lam_values,
                   "gamma_values": tuple(Fraction(g) for g in gamma_values)})
    return result
