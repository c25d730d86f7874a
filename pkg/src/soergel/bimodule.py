"""Bott-Samelson bimodules as concrete free modules over the polynomial ring.

A Bott-Samelson bimodule attached to a word is free as a left module with
basis indexed by 01-masks of the word.  Right multiplication is computed by
sliding a polynomial leftwards through the tensor slots: through a dotted
slot (mask bit 1) it slides unchanged, through an undotted slot (bit 0) it
splits into the reflected polynomial on the undotted basis element plus the
divided difference on the dotted one.

Stalks at a group element x are built inductively, one letter at a time: the
stalk of B*B(s) at x is the submodule of B_x + B_{xs} spanned by the pairs
(b_x, b_{xs}) together with x(alpha_s) * (b_x, 0).  The local intersection
form extends across the same step by (1/x(alpha_s)) * (form at x + form at
xs), which keeps every Gram entry an explicit root-denominator fraction.

Costalks are recovered independently by degreewise linear algebra (elements
whose right action is twisted by x), which gives a second, basis-independent
route to every local form via Gram inversion.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import linalg
from .errors import InternalRankMismatch, PositivityViolated
from .polynomial import Poly, RatFunc, monomials_of


# ---------------------------------------------------------------------------
# graded linear algebra helpers
# ---------------------------------------------------------------------------

def _layout(nvars, amb_degrees, deg):
    """Coordinate layout (slot, monomial) for vectors of a given degree."""
    out = []
    for k, e in enumerate(amb_degrees):
        h = deg - e
        if h < 0 or h % 2:
            continue
        for mono in monomials_of(nvars, h // 2):
            out.append((k, mono))
    return out


def _flatten(nvars, amb_degrees, deg, vec):
    layout = _layout(nvars, amb_degrees, deg)
    coords = [vec[k].terms.get(mono, Fraction(0)) for k, mono in layout]
    # guard: every term of the vector must be accounted for
    seen = {}
    for k, mono in layout:
        seen.setdefault(k, set()).add(mono)
    for k, p in enumerate(vec):
        for mono in p.terms:
            if mono not in seen.get(k, ()):
                raise InternalRankMismatch("vector has terms outside its declared degree")
    return coords


def graded_min_generators(nvars, amb_degrees, gens):
    """Minimal homogeneous generators of the span of ``gens``.

    ``gens`` is a list of (degree, vector-of-Poly) in a fixed order; in each
    degree, candidates are reduced modulo the span of lower-degree choices
    multiplied by all monomials of the complementary degree.
    """
    chosen = []
    for d in sorted({dg for dg, _ in gens}):
        rows = []
        for db, vb in chosen:
            h = d - db
            if h < 0 or h % 2:
                continue
            for mono in monomials_of(nvars, h // 2):
                mp = Poly(nvars, {mono: 1})
                rows.append(_flatten(nvars, amb_degrees, d, [mp * p for p in vb]))
        for dg, vg in gens:
            if dg != d:
                continue
            fl = _flatten(nvars, amb_degrees, d, vg)
            if any(fl) and not linalg.in_span(rows, fl):
                rows.append(fl)
                chosen.append((d, vg))
    return chosen


def express_in_basis(nvars, amb_degrees, basis, vec, deg):
    """Coordinates of a homogeneous vector over a free graded basis.

    ``basis`` is a list of (degree, vector); returns one Poly per basis
    element, or None if the vector is not in the span.
    """
    cols = []
    col_meta = []
    for bi, (db, vb) in enumerate(basis):
        h = deg - db
        if h < 0 or h % 2:
            continue
        for mono in monomials_of(nvars, h // 2):
            mp = Poly(nvars, {mono: 1})
            cols.append(_flatten(nvars, amb_degrees, deg, [mp * p for p in vb]))
            col_meta.append((bi, mono))
    target = _flatten(nvars, amb_degrees, deg, vec)
    if not any(target):
        return [Poly.zero(nvars) for _ in basis]
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(len(target))]
    sol = linalg.solve(rows, target)
    if sol is None:
        return None
    out = [Poly.zero(nvars) for _ in basis]
    for (bi, mono), c in zip(col_meta, sol):
        if c:
            out[bi] = out[bi] + Poly(nvars, {mono: c})
    return out


# ---------------------------------------------------------------------------
# the Bott-Samelson bimodule
# ---------------------------------------------------------------------------

class Stalk:
    """Free graded module data at one group element.

    ``images`` has one coordinate row per basis mask of the owning bimodule;
    ``gram`` is the local intersection form on the stalk basis.
    """

    __slots__ = ("degrees", "images", "gram")

    def __init__(self, degrees, images, gram):
        self.degrees = tuple(degrees)
        self.images = tuple(tuple(row) for row in images)
        self.gram = tuple(tuple(row) for row in gram)

    @property
    def rank(self):
        return len(self.degrees)

    def graded_rank(self):
        out = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out


def _empty_stalk(nmasks):
    return Stalk((), tuple(() for _ in range(nmasks)), ())


class BottSamelson:
    """Tensor word of elementary bimodules over a fixed Coxeter group."""

    def __init__(self, group, word):
        self.group = group
        self.word = tuple(word)
        self.masks = list(itertools.product((0, 1), repeat=len(self.word)))
        self.mask_index = {m: i for i, m in enumerate(self.masks)}
        self._gram = None
        self._product_cache = {}

    @property
    def rank(self):
        return self.group.rank

    def mask_degree(self, mask):
        return sum(1 if b else -1 for b in mask)

    def zero_elem(self):
        return {}

    def basis_elem(self, mask):
        return {tuple(mask): Poly.one(self.rank)}

    # -- right action --------------------------------------------------

    def _rmul(self, k, dct, f):
        """Right multiplication by f on left combinations of length-k masks."""
        if f.is_zero() or not dct:
            return {}
        if f.max_degree() == 0 or k == 0:
            c = f if isinstance(f, Poly) else Poly.constant(self.rank, f)
            return {m: v * c for m, v in dct.items()}
        i = self.word[k - 1]
        end0 = {m[:-1]: c for m, c in dct.items() if m[-1] == 0}
        end1 = {m[:-1]: c for m, c in dct.items() if m[-1] == 1}
        out = {}

        def add(mask, p):
            if p:
                cur = out.get(mask)
                s = p if cur is None else cur + p
                if s:
                    out[mask] = s
                else:
                    out.pop(mask, None)

        if end1:
            for m, c in self._rmul(k - 1, end1, f).items():
                add(m + (1,), c)
        if end0:
            s_f = self.group.act_poly(self.group.simple(i), f)
            d_f = self.group.divided_difference(i, f)
            for m, c in self._rmul(k - 1, end0, s_f).items():
                add(m + (0,), c)
            if not d_f.is_zero():
                for m, c in self._rmul(k - 1, end0, d_f).items():
                    add(m + (1,), c)
        return out

    def rmul(self, elem, f):
        return self._rmul(len(self.word), elem, f)

    def lmul(self, elem, f):
        return {m: f * c for m, c in elem.items() if f * c}

    # -- ring structure --------------------------------------------------

    def _basis_product(self, nu, tau):
        key = (nu, tau)
        cached = self._product_cache.get(key)
        if cached is not None:
            return cached
        acc = {(): Poly.one(self.rank)}
        for i in range(len(self.word)):
            a, b = nu[i], tau[i]
            if a and b:
                acc = self._rmul(i, acc, Poly.generator(self.rank, self.word[i]))
                bit = 1
            else:
                bit = 1 if (a or b) else 0
            acc = {m + (bit,): c for m, c in acc.items()}
        self._product_cache[key] = acc
        return acc

    def product(self, a, b):
        out = {}
        for pi, fa in a.items():
            for tau, gb in b.items():
                mid = self._rmul(len(self.word), {pi: Poly.one(self.rank)}, gb)
                for nu, h in mid.items():
                    coeff = fa * h
                    for mu, p in self._basis_product(nu, tau).items():
                        cur = out.get(mu)
                        s = coeff * p if cur is None else cur + coeff * p
                        if s:
                            out[mu] = s
                        else:
                            out.pop(mu, None)
        return out

    def intersection_form(self, a, b):
        """Coefficient of the full-mask basis element in the product."""
        full = (1,) * len(self.word)
        return self.product(a, b).get(full, Poly.zero(self.rank))

    def gram(self):
        """Global intersection form, by the one-letter-at-a-time recursion."""
        if self._gram is not None:
            return self._gram
        g = [[Poly.one(self.rank)]]
        for k, i in enumerate(self.word):
            alpha = Poly.generator(self.rank, i)
            prefix_masks = list(itertools.product((0, 1), repeat=k))
            size = 2 * len(prefix_masks)
            new = [[Poly.zero(self.rank)] * size for _ in range(size)]
            for pi_idx, pi in enumerate(prefix_masks):
                for tau_idx, tau in enumerate(prefix_masks):
                    for a, b in itertools.product((0, 1), repeat=2):
                        if a == 0 and b == 0:
                            continue
                        if a and b:
                            mid = self._rmul(k, {pi: Poly.one(self.rank)}, alpha)
                            val = Poly.zero(self.rank)
                            for nu, h in mid.items():
                                val = val + h * g[self._prefix_index(nu)][tau_idx]
                        else:
                            val = g[pi_idx][tau_idx]
                        new[2 * pi_idx + a][2 * tau_idx + b] = val
            g = new
        self._gram = g
        return g

    @staticmethod
    def _prefix_index(mask):
        idx = 0
        for b in mask:
            idx = 2 * idx + b
        return idx

    def pair(self, a, b):
        """Intersection form through the cached Gram matrix."""
        g = self.gram()
        out = Poly.zero(self.rank)
        for pi, fa in a.items():
            row = g[self.mask_index[pi]]
            for tau, gb in b.items():
                out = out + fa * gb * row[self.mask_index[tau]]
        return out

    # -- stalks ------------------------------------------------------------

    def stalks(self):
        """Stalk data at every group element, cached on the group."""
        cache = getattr(self.group, "_stalk_cache", None)
        if cache is None:
            cache = {}
            self.group._stalk_cache = cache
        return self._stalks_for(self.word, cache)

    def _stalks_for(self, word, cache):
        if word in cache:
            return cache[word]
        if not word:
            st = Stalk((0,), ((Poly.one(self.rank),),),
                       ((RatFunc.one(self.rank),),))
            result = {self.group.identity: st}
        else:
            prev = self._stalks_for(word[:-1], cache)
            result = extend_stalks(self.group, word[:-1], prev, word[-1])
        cache[word] = result
        return result

    def stalk(self, x):
        return self.stalks().get(x)

    def stalk_vector(self, elem, x):
        """Image of an element in the stalk basis at x."""
        st = self.stalk(x)
        if st is None or st.rank == 0:
            return ()
        out = [Poly.zero(self.rank) for _ in range(st.rank)]
        for mask, c in elem.items():
            row = st.images[self.mask_index[mask]]
            for k in range(st.rank):
                out[k] = out[k] + c * row[k]
        return tuple(out)

    def local_pair(self, x, u, v):
        """Local pairing of the stalk images of two elements at x."""
        st = self.stalk(x)
        if st is None or st.rank == 0:
            return RatFunc.zero(self.rank)
        a = self.stalk_vector(u, x)
        b = self.stalk_vector(v, x)
        out = RatFunc.zero(self.rank)
        for k in range(st.rank):
            if a[k].is_zero():
                continue
            for l in range(st.rank):
                if b[l].is_zero():
                    continue
                out = out + (a[k] * b[l]) * st.gram[k][l]
        return out

    def total_form_decomposes(self, u, v):
        """Global pairing equals the sum of local pairings (exact check)."""
        total = RatFunc.from_poly(self.pair(u, v))
        local = RatFunc.zero(self.rank)
        for x, st in self.stalks().items():
            if st.rank:
                local = local + self.local_pair(x, u, v)
        return total == local

    def bottom_class(self, x):
        """Stalk coordinates of the image of the all-undotted basis element."""
        st = self.stalk(x)
        if st is None:
            return ()
        return st.images[0]

    def bottom_self_pairing(self, x):
        """Pairing of the bottom class with itself; equals e(x, word)."""
        st = self.stalk(x)
        if st is None or st.rank == 0:
            return RatFunc.zero(self.rank)
        row = st.images[0]
        out = RatFunc.zero(self.rank)
        for k in range(st.rank):
            for l in range(st.rank):
                out = out + (row[k] * row[l]) * st.gram[k][l]
        return out

    # -- costalk (independent route) ----------------------------------------

    def costalk(self, x):
        """Basis, Gram and stalk images of the sections supported at x.

        Computed by degreewise kernel extraction from the twisted-right-action
        equations, entirely independent of the stalk tower.
        """
        st = self.stalk(x)
        if st is None or st.rank == 0:
            return {"degrees": (), "vectors": (), "gram": (), "stalk_matrix": ()}
        nvars = self.rank
        amb = [self.mask_degree(m) for m in self.masks]
        alphas = [Poly.generator(nvars, i) for i in range(nvars)]
        x_alphas = [self.group.act_poly(x, a) for a in alphas]
        target = sorted(-d for d in st.degrees)
        chosen = []
        for d in range(min(target), max(target) + 1):
            want = target.count(d)
            if not want:
                continue
            # flatten the degree-d slice of the bimodule and the conditions
            dom_layout = _layout(nvars, amb, d)
            if not dom_layout:
                raise InternalRankMismatch("empty degree slice where sections expected")
            rows = []
            for j in range(nvars):
                cod_layout = _layout(nvars, amb, d + 2)
                cond_rows = [[Fraction(0)] * len(dom_layout) for _ in cod_layout]
                for ci, (mask_i, mono) in enumerate(dom_layout):
                    elem = {self.masks[mask_i]: Poly(nvars, {mono: 1})}
                    img = self.rmul(elem, alphas[j])
                    for mask, p in self.lmul(elem, x_alphas[j]).items():
                        cur = img.get(mask)
                        s = (-p) if cur is None else cur - p
                        if s:
                            img[mask] = s
                        else:
                            img.pop(mask, None)
                    vec = [Poly.zero(nvars) for _ in self.masks]
                    for mask, p in img.items():
                        vec[self.mask_index[mask]] = p
                    fl = _flatten(nvars, amb, d + 2, vec)
                    for ri in range(len(cod_layout)):
                        cond_rows[ri][ci] = fl[ri]
                rows.extend(cond_rows)
            kern = linalg.kernel(rows) if rows else []
            # reduce modulo multiples of lower-degree sections
            old = []
            for db, vb in chosen:
                h = d - db
                if h < 0 or h % 2:
                    continue
                for mono in monomials_of(nvars, h // 2):
                    mp = Poly(nvars, {mono: 1})
                    old.append(_flatten(nvars, amb, d, [mp * p for p in vb]))
            picked = 0
            for kv in kern:
                if picked == want:
                    break
                if not linalg.in_span(old, kv):
                    old.append(kv)
                    vec = [Poly.zero(nvars) for _ in self.masks]
                    for (mask_i, mono), c in zip(dom_layout, kv):
                        if c:
                            vec[mask_i] = vec[mask_i] + Poly(nvars, {mono: c})
                    chosen.append((d, tuple(vec)))
                    picked += 1
            if picked != want:
                raise InternalRankMismatch(
                    f"found {picked} sections of degree {d}, expected {want}")
        vectors = [{self.masks[i]: p for i, p in enumerate(vec) if p}
                   for _, vec in chosen]
        gram = [[self.pair(u, v) for v in vectors] for u in vectors]
        stalk_matrix = [self.stalk_vector(v, x) for v in vectors]
        return {"degrees": tuple(d for d, _ in chosen),
                "vectors": tuple(vectors),
                "gram": tuple(tuple(r) for r in gram),
                "stalk_matrix": tuple(stalk_matrix)}


def extend_stalks(group, word, prev, letter):
    """Stalks of B*B(s) from the stalks of B, for every group element."""
    nmasks = 2 ** len(word)
    mask_degs = [sum(1 if b else -1 for b in m)
                 for m in itertools.product((0, 1), repeat=len(word))]
    s = group.simple(letter)
    out = {}
    for x in group.elements:
        st_x = prev.get(x) or _empty_stalk(nmasks)
        st_xs = prev.get(x * s) or _empty_stalk(nmasks)
        if st_x.rank == 0 and st_xs.rank == 0:
            continue
        out[x] = _extend_point(group, letter, mask_degs, st_x, st_xs, x)
    return out


def _extend_point(group, letter, mask_degs, st_x, st_xs, x):
    nvars = group.rank
    sign, root = group.root_image(x, [int(a == letter) for a in range(nvars)])
    x_alpha = Poly.linear(root) * sign
    amb = [d - 1 for d in st_x.degrees] + [d - 1 for d in st_xs.degrees]
    nx = st_x.rank

    gens = []
    for p in range(len(mask_degs)):
        row_x = st_x.images[p]
        row_xs = st_xs.images[p]
        vec0 = list(row_x) + list(row_xs)
        gens.append((mask_degs[p] - 1, tuple(vec0)))
        vec1 = [x_alpha * q for q in row_x] + [Poly.zero(nvars)] * st_xs.rank
        gens.append((mask_degs[p] + 1, tuple(vec1)))

    basis = graded_min_generators(nvars, amb, gens)
    if len(basis) != st_x.rank + st_xs.rank:
        raise InternalRankMismatch(
            f"stalk rank {len(basis)} != {st_x.rank} + {st_xs.rank}")

    images = []
    for deg, vec in gens:
        coords = express_in_basis(nvars, amb, basis, vec, deg)
        if coords is None:
            raise InternalRankMismatch("generator not expressible in extracted basis")
        images.append(tuple(coords))

    gram = []
    for da, va in basis:
        row = []
        for db, vb in basis:
            val = RatFunc.zero(nvars)
            for k in range(nx):
                if va[k].is_zero():
                    continue
                for l in range(nx):
                    if vb[l].is_zero():
                        continue
                    val = val + (va[k] * vb[l]) * st_x.gram[k][l]
            for k in range(st_xs.rank):
                if va[nx + k].is_zero():
                    continue
                for l in range(st_xs.rank):
                    if vb[nx + l].is_zero():
                        continue
                    val = val + (va[nx + k] * vb[nx + l]) * st_xs.gram[k][l]
            row.append(val.div_root(root, sign))
        gram.append(row)

    return Stalk([d for d, _ in basis], images, gram)


def stalk_pair_vectors(group, word, prev, letter, x):
    """One extension step at a single point, keeping the ambient vectors.

    Returns (basis degrees, vectors over B_x + B_{xs} coordinates, split
    position, gram).  Used by the moment-graph sheaf construction, which
    needs the section lattice inside the two stalks.
    """
    nmasks = 2 ** len(word)
    mask_degs = [sum(1 if b else -1 for b in m)
                 for m in itertools.product((0, 1), repeat=len(word))]
    st_x = prev.get(x) or _empty_stalk(nmasks)
    st_xs = prev.get(x * group.simple(letter)) or _empty_stalk(nmasks)
    nvars = group.rank
    sign, root = group.root_image(x, [int(a == letter) for a in range(nvars)])
    x_alpha = Poly.linear(root) * sign
    amb = [d - 1 for d in st_x.degrees] + [d - 1 for d in st_xs.degrees]
    gens = []
    for p in range(len(mask_degs)):
        vec0 = list(st_x.images[p]) + list(st_xs.images[p])
        gens.append((mask_degs[p] - 1, tuple(vec0)))
        vec1 = [x_alpha * q for q in st_x.images[p]] + [Poly.zero(nvars)] * st_xs.rank
        gens.append((mask_degs[p] + 1, tuple(vec1)))
    basis = graded_min_generators(nvars, amb, gens)
    if len(basis) != st_x.rank + st_xs.rank:
        raise InternalRankMismatch("section lattice rank mismatch")
    return basis, st_x, st_xs, (sign, root)


# ---------------------------------------------------------------------------
# factorization maps
# ---------------------------------------------------------------------------

class FactorizationDatum:
    """A map from a Bott-Samelson bimodule into a shifted direct sum, whose
    composite with its adjoint is multiplication by a fixed degree-2 element
    minus the twisted scalar it specialises to.

    ``components`` lists (word, form scale); the scale keeps all arithmetic
    rational instead of adjoining square roots: one leg of each dot map
    carries the full pairing weight while its adjoint carries weight one, and
    adjointness is checked against the correspondingly rescaled form.
    """

    def __init__(self, group, source_word, lam, components, d_blocks, dstar_blocks,
                 mode="plain", s_letter=None, deform=None):
        self.group = group
        self.source_word = tuple(source_word)
        self.lam = lam
        self.components = components
        self.d_blocks = d_blocks
        self.dstar_blocks = dstar_blocks
        self.mode = mode
        self.s_letter = s_letter
        self.deform = deform
        self.source = BottSamelson(group, self.source_word)

    def composite(self):
        """Matrix of (adjoint after map) on the source basis."""
        n = len(self.source.masks)
        out = [[Poly.zero(self.group.rank) for _ in range(n)] for _ in range(n)]
        for block_d, block_dstar in zip(self.d_blocks, self.dstar_blocks):
            m = len(block_d)
            for col in range(n):
                for t in range(m):
                    c = block_d[t][col]
                    if c.is_zero():
                        continue
                    for row in range(n):
                        c2 = block_dstar[row][t]
                        if not c2.is_zero():
                            out[row][col] = out[row][col] + c2 * c
        return out

    def expected_composite(self):
        bs = self.source
        n = len(bs.masks)
        rank = self.group.rank
        out = [[Poly.zero(rank) for _ in range(n)] for _ in range(n)]
        y = self.group.element_from_word(self.source_word)
        if self.mode == "plain":
            ylam = self.group.act_poly(y, self.lam)
            for col, mask in enumerate(bs.masks):
                for m2, c in bs.rmul(bs.basis_elem(mask), self.lam).items():
                    out[bs.mask_index[m2]][col] = out[bs.mask_index[m2]][col] + c
                out[col][col] = out[col][col] - ylam
        else:
            a, _z_word = self.deform
            s = self.group.simple(self.s_letter)
            slam = self.group.act_poly(s, self.lam)
            ys_lam = self.group.act_poly(y, self.lam)  # source word is z + s
            for col, mask in enumerate(bs.masks):
                for m2, c in bs.rmul(bs.basis_elem(mask), self.lam).items():
                    out[bs.mask_index[m2]][col] = out[bs.mask_index[m2]][col] + c
                # middle multiplication by a*s(lam) just before the last slot
                prefix, bit = mask[:-1], mask[-1]
                mid = bs._rmul(len(bs.word) - 1, {prefix: Poly.one(rank)}, slam * a)
                for mp, c in mid.items():
                    out[bs.mask_index[mp + (bit,)]][col] = \
                        out[bs.mask_index[mp + (bit,)]][col] - c
                out[col][col] = out[col][col] - (1 - a) * ys_lam
        return out

    def verify_composite(self):
        got = self.composite()
        want = self.expected_composite()
        return got == want

    def verify_adjoint(self):
        """Adjointness of the two blocks against the rescaled target forms."""
        bs = self.source
        g_src = bs.gram()
        for comp, block_d, block_dstar in zip(self.components, self.d_blocks,
                                              self.dstar_blocks):
            word_c, scale = comp
            g_c = BottSamelson(self.group, word_c).gram()
            m = len(g_c)
            n = len(bs.masks)
            for mu in range(n):
                for tau in range(m):
                    lhs = Poly.zero(self.group.rank)
                    for nu in range(m):
                        if not block_d[nu][mu].is_zero():
                            lhs = lhs + block_d[nu][mu] * g_c[nu][tau] * scale
                    rhs = Poly.zero(self.group.rank)
                    for rho in range(n):
                        if not block_dstar[rho][tau].is_zero():
                            rhs = rhs + g_src[mu][rho] * block_dstar[rho][tau]
                    if lhs != rhs:
                        return False
        return True


def _pairing(group, lam, letter):
    return group.realisation.pair_with_coroot(lam.linear_coords(), letter)


def _extend_blocks(group, z_word, rec_components, rec_d, rec_dstar, letter, weight):
    """One recursion step: new component B(z) plus every old component B(s)."""
    bsz = BottSamelson(group, z_word)
    zmasks = bsz.masks
    n_src = 2 * len(zmasks)
    alpha = Poly.generator(group.rank, letter)

    block0_d = [[Poly.zero(group.rank) for _ in range(n_src)] for _ in zmasks]
    block0_dstar = [[Poly.zero(group.rank) for _ in zmasks] for _ in range(n_src)]
    for p, mask in enumerate(zmasks):
        # bit 0 -> multiplication map sends it to the plain basis element
        block0_d[p][2 * p] = Poly.constant(group.rank, weight)
        # bit 1 -> multiplication map gives right multiplication by alpha
        for m2, c in bsz.rmul(bsz.basis_elem(mask), alpha).items():
            q = zmasks.index(m2)
            block0_d[q][2 * p + 1] = block0_d[q][2 * p + 1] + c * weight
        # adjoint of the dot map: append a dotted slot
        block0_dstar[2 * p + 1][p] = Poly.one(group.rank)

    components = [(tuple(z_word), Fraction(1, 1) / weight)]
    d_blocks = [block0_d]
    dstar_blocks = [block0_dstar]
    for comp, bd, bds in zip(rec_components, rec_d, rec_dstar):
        word_c, scale = comp
        mc = len(bd)
        new_d = [[Poly.zero(group.rank) for _ in range(n_src)] for _ in range(2 * mc)]
        new_dstar = [[Poly.zero(group.rank) for _ in range(2 * mc)] for _ in range(n_src)]
        for t in range(mc):
            for scol in range(len(zmasks)):
                for bit in (0, 1):
                    new_d[2 * t + bit][2 * scol + bit] = bd[t][scol]
                    new_dstar[2 * scol + bit][2 * t + bit] = bds[scol][t]
        components.append((tuple(word_c) + (letter,), scale))
        d_blocks.append(new_d)
        dstar_blocks.append(new_dstar)
    return components, d_blocks, dstar_blocks


def build_factorization(group, word, lam, mode="plain", s_letter=None, a=0,
                        check=True):
    """Factorization datum for a reduced word and a degree-2 element.

    ``plain`` realises right-multiplication-minus-scalar on the word's
    bimodule; ``deformed`` (with a distinguished letter s, ys > y, and a
    rational 0 <= a < 1) realises the three-term deformed identity on the
    bimodule of word + s.
    """
    word = tuple(word)
    if not group.is_reduced(word):
        raise PositivityViolated("factorization requires a reduced word")
    if mode == "plain":
        comps, dbs, dstars = _build_plain(group, word, lam)
        datum = FactorizationDatum(group, word, lam, comps, dbs, dstars, mode="plain")
    elif mode == "deformed":
        if s_letter is None:
            raise ValueError("deformed mode needs the distinguished letter")
        a = Fraction(a)
        if not (0 <= a < 1):
            raise PositivityViolated("deformation parameter must satisfy 0 <= a < 1")
        y = group.element_from_word(word)
        s = group.simple(s_letter)
        if group.length_of(y * s) <= group.length_of(y):
            raise PositivityViolated("deformed mode needs ys > y")
        w = _pairing(group, lam, s_letter)
        if w <= 0:
            raise PositivityViolated("the distinguished pairing must be positive")
        slam = group.act_poly(s, lam)
        rec_c, rec_d, rec_ds = _build_plain(group, word, slam * (1 - a))
        comps, dbs, dstars = _extend_blocks(group, word, rec_c, rec_d, rec_ds,
                                            s_letter, w)
        datum = FactorizationDatum(group, word + (s_letter,), lam, comps, dbs,
                                   dstars, mode="deformed", s_letter=s_letter,
                                   deform=(a, word))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if check:
        if not datum.verify_composite():
            raise InternalRankMismatch("factorization composite identity failed")
        if not datum.verify_adjoint():
            raise InternalRankMismatch("factorization adjointness failed")
    return datum


def _build_plain(group, word, lam):
    if not word:
        return [], [], []
    z_word, letter = word[:-1], word[-1]
    w = _pairing(group, lam, letter)
    if w <= 0:
        raise PositivityViolated(
            f"pairing against letter {letter} must be positive, got {w}")
    s = group.simple(letter)
    rec_c, rec_d, rec_ds = _build_plain(group, z_word, group.act_poly(s, lam))
    return _extend_blocks(group, z_word, rec_c, rec_d, rec_ds, letter, w)


def deformed_gamma(group, datum, x, coweight):
    """The degree-2 pair that the deformed composite multiplies by on the
    section lattice at (x, xs): coefficients of z on the two components."""
    if datum.mode != "deformed":
        raise ValueError("gamma is attached to deformed data")
    a, z_word = datum.deform
    lam = datum.lam
    s = group.simple(datum.s_letter)
    ys = group.element_from_word(z_word) * s
    xs = x * s
    lam_c = lam.linear_coords()
    def sig(el):
        return group.realisation.pair_with_coweight(el.apply_to_coords(lam_c), coweight)
    lam0 = sig(x) - sig(ys) - a * (sig(xs) - sig(ys))
    laminf = (1 - a) * (sig(xs) - sig(ys))
    return lam0, laminf
