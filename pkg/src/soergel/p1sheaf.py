"""Sheaves on the moment graph of the projective line, exactly.

A sheaf here is a pair of free graded lattices over the one-variable ring
(the stalks at the two fixed points), a polarisation (one graded symmetric
form on each), and an explicit graded basis of the section lattice inside
their direct sum.  Everything is graded, so a homogeneous vector is stored
as its rational coefficient per slot, the z-power being forced by degrees.

The section lattice of the sheaf attached to a bimodule stalk pair is the
image of the two-point section module, whose basis the stalk tower already
computes; the boundary module at the generic point and the two restriction
maps are recovered degreewise, and the sheaf axioms (generic stalk killed by
z, one restriction surjective, the other a quotient by z) are verified at
build time.

Lefschetz operators are pairs (a z, b z); the ample cone is 0 < b < a.  The
ample-cone quantifier is discharged exactly: each degree contributes one
determinant polynomial in c = a/b, whose roots in (1, infinity) are counted
by Sturm sequences; signatures are then sampled once per root-free region.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import hodge, linalg
from .bimodule import BottSamelson, stalk_pair_vectors
from .errors import (HLRequired, HRHypothesisFails, NotP1Sheaf,
                     ParityViolation)
from .polynomial import (UniPoly, cauchy_root_bound, sturm_roots_in_interval)


class P1Sheaf:
    """Polarised sheaf data: two lattices, forms, and a section basis."""

    def __init__(self, m0_degrees, form0, minf_degrees, forminf,
                 sec_degrees, sec0, secinf, label="", check=True):
        self.m0_degrees = tuple(m0_degrees)
        self.minf_degrees = tuple(minf_degrees)
        self.form0 = tuple(tuple(Fraction(c) for c in row) for row in form0)
        self.forminf = tuple(tuple(Fraction(c) for c in row) for row in forminf)
        self.sec_degrees = tuple(sec_degrees)
        self.sec0 = tuple(tuple(Fraction(c) for c in row) for row in sec0)
        self.secinf = tuple(tuple(Fraction(c) for c in row) for row in secinf)
        self.label = label
        if check:
            self.verify_axioms()

    # -- basic structure -----------------------------------------------

    @property
    def rank0(self):
        return len(self.m0_degrees)

    @property
    def rankinf(self):
        return len(self.minf_degrees)

    def lattice0(self):
        return hodge.SpecializedLattice(self.m0_degrees, self.form0)

    def latticeinf(self):
        return hodge.SpecializedLattice(self.minf_degrees, self.forminf)

    def graded_rank_sections(self):
        out = {}
        for d in self.sec_degrees:
            out[d] = out.get(d, 0) + 1
        return out

    # -- degreewise pictures ---------------------------------------------

    def _slots(self, k):
        """(side, index) slots of the degree-k part of the two stalks."""
        out = []
        for i, e in enumerate(self.m0_degrees):
            if e <= k and (k - e) % 2 == 0:
                out.append((0, i))
        for i, e in enumerate(self.minf_degrees):
            if e <= k and (k - e) % 2 == 0:
                out.append((1, i))
        return out

    def _section_rows(self, k, slots):
        rows = []
        for j, dj in enumerate(self.sec_degrees):
            if dj > k or (k - dj) % 2:
                continue
            row = []
            for side, i in slots:
                row.append(self.sec0[j][i] if side == 0 else self.secinf[j][i])
            rows.append(row)
        return rows

    def _window(self):
        degs = self.m0_degrees + self.minf_degrees
        if not degs:
            return range(0)
        lo = min(degs)
        dz = (sum(self.sec_degrees) - sum(degs)) // 2
        return range(lo, max(degs) + 2 * max(dz, 0) + 3)

    def mcstar_dimensions(self):
        """Graded dimensions of the boundary module (cokernel of sections)."""
        out = {}
        for k in self._window():
            slots = self._slots(k)
            if not slots:
                continue
            dim = len(slots) - linalg.rank(self._section_rows(k, slots))
            if dim:
                out[k] = dim
        return out

    def verify_axioms(self):
        """Sections free of full rank; boundary killed by z; restriction maps
        surjective / a quotient by z.  Raises on violation."""
        if len(self.sec_degrees) != self.rank0 + self.rankinf:
            raise NotP1Sheaf("section count differs from total stalk rank")
        # A-independence: graded determinant of the section matrix
        if self.sec_degrees:
            entries = []
            amb = list(self.m0_degrees) + list(self.minf_degrees)
            for j, dj in enumerate(self.sec_degrees):
                row = []
                coords = list(self.sec0[j]) + list(self.secinf[j])
                for e, c in zip(amb, coords):
                    h = (dj - e) // 2 if (dj - e) % 2 == 0 and dj >= e else None
                    if c and h is None:
                        raise NotP1Sheaf("section entry violates grading")
                    row.append(UniPoly.monomial(c, h) if (c and h is not None)
                               else UniPoly.zero())
                entries.append(row)
            det = linalg.bareiss_det(entries,
                                     lambda a, b: a * b,
                                     lambda a, b: a - b,
                                     lambda a, b: a.exact_div(b),
                                     UniPoly.one())
            if det.is_zero():
                raise NotP1Sheaf("section lattice is degenerate")
        for k in self._window():
            slots2 = self._slots(k + 2)
            l_next = self._section_rows(k + 2, slots2)
            # z * (degree-k stalk part) must die in the boundary module
            for side, i in self._slots(k):
                unit = [Fraction(int(sl == (side, i))) for sl in slots2]
                if not linalg.in_span(l_next, unit):
                    raise NotP1Sheaf(f"boundary module not killed by z at degree {k}")
            slots = self._slots(k)
            if not slots:
                continue
            lk = self._section_rows(k, slots)
            full = len(slots) - linalg.rank(lk)
            for side in (0, 1):
                units = [[Fraction(int(sl == (side2, i2))) for sl in slots]
                         for side2, i2 in slots if side2 == side]
                if len(slots) - linalg.rank(lk + units) != 0 and full != 0:
                    name = "rho_0" if side == 0 else "rho_inf"
                    raise NotP1Sheaf(f"{name} not surjective at degree {k}")
            # kernel of rho_inf equals z * (infinity stalk)
            zero_side = [pos for pos, (side, _) in enumerate(slots) if side == 0]
            rows_for_kernel = [[row[pos] for row in lk] for pos in zero_side]
            combos = linalg.kernel(rows_for_kernel) if zero_side else \
                [[Fraction(int(a == b)) for a in range(len(lk))] for b in range(len(lk))]
            mixed = []
            for cvec in combos:
                v = [sum(c * row[pos] for c, row in zip(cvec, lk))
                     for pos in range(len(slots))]
                mixed.append(v)
            z_inf = [[Fraction(int(sl == (1, i))) for sl in slots]
                     for side2, i in self._slots(k - 2) if side2 == 1]
            r_mixed = linalg.rank(mixed)
            r_zinf = linalg.rank(z_inf)
            if r_mixed != r_zinf or linalg.rank(mixed + z_inf) != r_zinf:
                raise NotP1Sheaf(f"kernel of rho_inf is not z*M_inf at degree {k}")

    # -- forms on sections ----------------------------------------------

    def section_pair_coeff(self, i, j, side):
        """Rational coefficient of the side-form pairing of two sections."""
        form = self.form0 if side == 0 else self.forminf
        vec_i = self.sec0[i] if side == 0 else self.secinf[i]
        vec_j = self.sec0[j] if side == 0 else self.secinf[j]
        out = Fraction(0)
        for a, ca in enumerate(vec_i):
            if ca:
                for b, cb in enumerate(vec_j):
                    if cb:
                        out += ca * cb * form[a][b]
        return out

    def ample_matrix(self, d, indices):
        """Gram of the (a z, b z)^{-d}-scaled form at (a, b) = (c, 1), as
        polynomials in c over the chosen sections."""
        out = []
        for i in indices:
            row = []
            for j in indices:
                a_part = self.section_pair_coeff(i, j, 0)
                b_part = self.section_pair_coeff(i, j, 1)
                coeffs = [Fraction(0)] * (-d + 1)
                coeffs[0] = b_part
                coeffs[-d] += a_part
                row.append(UniPoly(coeffs))
            out.append(row)
        return out

    def gamma_matrix(self, d, indices, a, b):
        a, b = Fraction(a), Fraction(b)
        return [[self.section_pair_coeff(i, j, 0) * a ** (-d)
                 + self.section_pair_coeff(i, j, 1) * b ** (-d)
                 for j in indices] for i in indices]


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def sheaf_from_bimodule(bs, x, s_letter, coweight, check=True):
    """The polarised sheaf of a bimodule stalk pair across x < xs.

    Stalks get a degree shift by one and forms a common scale by the value
    of x(alpha_s) on the coweight line; the sections are the specialised
    two-point lattice, which the stalk extension step provides directly.
    """
    group = bs.group
    s = group.simple(s_letter)
    xs = x * s
    if group.length_of(xs) <= group.length_of(x):
        raise ValueError("construction requires x < xs")
    prev = bs.stalks()
    basis, st_x, st_xs, (sign, root) = stalk_pair_vectors(
        group, bs.word, prev, s_letter, x)
    scale = sign * group.realisation.pair_with_coweight(root, coweight)
    if scale == 0:
        raise NotP1Sheaf("coweight is not regular for this edge")

    def lattice_of(st):
        degs = [d - 1 for d in st.degrees]
        coeffs = [[st.gram[i][j].sigma_monomial(coweight)[0] / scale
                   for j in range(st.rank)] for i in range(st.rank)]
        return degs, coeffs

    m0_degrees, form0 = lattice_of(st_x)
    minf_degrees, forminf = lattice_of(st_xs)
    sec_degrees = []
    sec0 = []
    secinf = []
    nx = st_x.rank
    for deg, vec in basis:
        sec_degrees.append(deg)
        row0 = []
        for k in range(nx):
            c, _ = _poly_sigma_coeff(vec[k], coweight)
            row0.append(c)
        rowinf = []
        for k in range(st_xs.rank):
            c, _ = _poly_sigma_coeff(vec[nx + k], coweight)
            rowinf.append(c)
        sec0.append(row0)
        secinf.append(rowinf)
    return P1Sheaf(m0_degrees, form0, minf_degrees, forminf,
                   sec_degrees, sec0, secinf,
                   label=f"M({''.join(group.realisation.names[i] for i in bs.word) or 'R'},"
                         f"{x.name},{xs.name})",
                   check=check)


def _poly_sigma_coeff(p, coweight):
    if p.is_zero():
        return Fraction(0), 0
    u = p.sigma(coweight)
    k = p.degree() // 2
    c = u.coeffs[k] if k < len(u.coeffs) else Fraction(0)
    return c, k


def skyscraper(degrees, form, label="skyscraper"):
    n = len(degrees)
    sec = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return P1Sheaf(degrees, form, (), [], degrees, sec,
                   [[] for _ in range(n)], label=label)


def constant_sheaf(degrees, form0, forminf=None, label="constant"):
    """Constant sheaf on a lattice; default polarisation flips the sign at
    infinity (the polarised-constant convention)."""
    n = len(degrees)
    if forminf is None:
        forminf = [[-form0[i][j] for j in range(n)] for i in range(n)]
    sec_degrees = []
    sec0 = []
    secinf = []
    for i in range(n):
        sec_degrees.append(degrees[i])
        sec0.append([Fraction(int(j == i)) for j in range(n)])
        secinf.append([Fraction(int(j == i)) for j in range(n)])
    for i in range(n):
        sec_degrees.append(degrees[i] + 2)
        sec0.append([Fraction(int(j == i)) for j in range(n)])
        secinf.append([Fraction(0)] * n)
    order = sorted(range(len(sec_degrees)), key=lambda t: sec_degrees[t])
    return P1Sheaf(degrees, form0, degrees, forminf,
                   [sec_degrees[t] for t in order],
                   [sec0[t] for t in order],
                   [secinf[t] for t in order], label=label)


def rank_one_constant(m, lam0, laminf):
    """The basic example: constant sheaf generated in degree m <= -2 with
    scalar polarisation (lam0, laminf)."""
    return constant_sheaf([m], [[lam0]], [[laminf]],
                          label=f"constant(m={m},{lam0},{laminf})")


def direct_sum(sheaves, label="sum"):
    m0_degrees = []
    minf_degrees = []
    sec_degrees = []
    for m in sheaves:
        m0_degrees.extend(m.m0_degrees)
        minf_degrees.extend(m.minf_degrees)
        sec_degrees.extend(m.sec_degrees)
    def block(mats, sizes):
        total = sum(sizes)
        out = [[Fraction(0)] * total for _ in range(total)]
        off = 0
        for mat, size in zip(mats, sizes):
            for i in range(size):
                for j in range(size):
                    out[off + i][off + j] = mat[i][j]
            off += size
        return out
    form0 = block([m.form0 for m in sheaves], [m.rank0 for m in sheaves])
    forminf = block([m.forminf for m in sheaves], [m.rankinf for m in sheaves])
    sec0 = []
    secinf = []
    off0 = [0]
    offi = [0]
    for m in sheaves:
        off0.append(off0[-1] + m.rank0)
        offi.append(offi[-1] + m.rankinf)
    for mi, m in enumerate(sheaves):
        for j in range(len(m.sec_degrees)):
            row0 = [Fraction(0)] * sum(x.rank0 for x in sheaves)
            rowi = [Fraction(0)] * sum(x.rankinf for x in sheaves)
            for k, c in enumerate(m.sec0[j]):
                row0[off0[mi] + k] = c
            for k, c in enumerate(m.secinf[j]):
                rowi[offi[mi] + k] = c
            sec0.append(row0)
            secinf.append(rowi)
    return P1Sheaf(m0_degrees, form0, minf_degrees, forminf,
                   sec_degrees, sec0, secinf, label=label)


# ---------------------------------------------------------------------------
# ample-cone checkers
# ---------------------------------------------------------------------------

def hl_ample_report(m):
    """Hard Lefschetz over the whole ample cone, decided by Sturm counts."""
    if not m.sec_degrees:
        return {"holds": True, "per_degree": []}
    if max(m.sec_degrees) > 0:
        raise HLRequired("sections must be generated in degrees <= 0")
    per = []
    holds = True
    for d in range(min(m.sec_degrees), 1):
        idx = [j for j, dj in enumerate(m.sec_degrees) if dj <= d]
        if not idx:
            continue
        mat = m.ample_matrix(d, idx)
        det = linalg.bareiss_det(mat, lambda a, b: a * b, lambda a, b: a - b,
                                 lambda a, b: a.exact_div(b), UniPoly.one())
        if det.is_zero():
            per.append({"degree": d, "det": det, "roots_gt1": None})
            holds = False
            continue
        roots = sturm_roots_in_interval(det, Fraction(1), None)
        per.append({"degree": d, "det": det, "roots_gt1": roots})
        holds = holds and roots == 0
    return {"holds": holds, "per_degree": per}


def hl_at_gamma(m, a, b):
    """Hard Lefschetz at one Lefschetz operator (a z, b z)."""
    for d in range(min(m.sec_degrees, default=0), 1):
        idx = [j for j, dj in enumerate(m.sec_degrees) if dj <= d]
        if idx and linalg.det(m.gamma_matrix(d, idx, a, b)) == 0:
            return False
    return True


def _parity_ok(m):
    parities = {d % 2 for d in m.m0_degrees} | {d % 2 for d in m.minf_degrees}
    return len(parities) <= 1


def _signature_pattern(m, a, b):
    """Signatures of the scaled forms on each graded piece of the sections."""
    if not m.sec_degrees:
        return []
    minimum = min(m.sec_degrees)
    out = []
    for d in range(minimum, 1):
        if (d - minimum) % 2:
            continue
        idx = [j for j, dj in enumerate(m.sec_degrees)
               if dj <= d and (d - dj) % 2 == 0]
        if not idx:
            continue
        mat = m.gamma_matrix(d, idx, a, b)
        p, n = hodge.signature(mat)
        out.append((d, p, n))
    return out


def _expected_signatures(m, epsilon):
    counts = m.graded_rank_sections()
    minimum = min(counts)
    f = {}
    for d, c in counts.items():
        f[(d - minimum) // 2] = c
    out = {}
    for d in range(minimum, 1):
        if (d - minimum) % 2:
            continue
        i = (d - minimum) // 2
        out[d] = epsilon * sum(f.get(j, 0) * (-1) ** j for j in range(i + 1))
    return out


def hr_at_gamma(m, a, b):
    """Hodge-Riemann at one operator: alternating signatures for some sign."""
    if not m.sec_degrees:
        return True
    if not _parity_ok(m):
        raise ParityViolation("stalk parities differ")
    if not hl_at_gamma(m, a, b):
        return False
    pattern = _signature_pattern(m, a, b)
    for eps in (1, -1):
        want = _expected_signatures(m, eps)
        if all(p - n == want[d] for d, p, n in pattern):
            return True
    return False


def hr_ample_report(m, sample=Fraction(2)):
    """Hodge-Riemann over the ample cone: hard Lefschetz by Sturm plus one
    signature sample (signatures are constant on a root-free interval)."""
    hl = hl_ample_report(m)
    if not hl["holds"]:
        return {"holds": False, "hl": hl, "sample": None}
    if not m.sec_degrees:
        return {"holds": True, "hl": hl, "sample": None}
    if not _parity_ok(m):
        raise ParityViolation("stalk parities differ")
    c = Fraction(sample)
    ok = hr_at_gamma(m, c, 1)
    return {"holds": ok, "hl": hl, "sample": c}


def opposite_signs_report(m):
    """The four polarisation conditions that feed the limit lemma."""
    result = {"parity": _parity_ok(m),
              "generated_nonpositively":
                  all(d <= 0 for d in m.sec_degrees),
              "hr_at_0": None, "hr_at_inf": None, "opposite": None,
              "holds": False}
    if not result["parity"] or not result["generated_nonpositively"]:
        return result
    lat0 = m.lattice0()
    latinf = m.latticeinf()
    rep0 = hodge.hodge_riemann_report(lat0, 0) if lat0.rank else None
    repinf = hodge.hodge_riemann_report(latinf, 0) if latinf.rank else None
    result["hr_at_0"] = rep0.hr_holds if rep0 else True
    result["hr_at_inf"] = repinf.hr_holds if repinf else True
    if not (result["hr_at_0"] and result["hr_at_inf"]):
        return result
    opp = True
    if lat0.rank and latinf.rank:
        b0 = {b["degree"]: b for b in hodge.primitive_blocks(lat0)}
        binf = {b["degree"]: b for b in hodge.primitive_blocks(latinf)}
        for d in set(b0) & set(binf):
            g0, gi = b0[d]["gram"], binf[d]["gram"]
            if not g0 or not gi:
                continue
            s0 = hodge.signature(g0)
            si = hodge.signature(gi)
            sign0 = 1 if s0[0] else -1
            signi = 1 if si[0] else -1
            if sign0 == signi:
                opp = False
    result["opposite"] = opp
    result["holds"] = opp
    return result


def limit_scan(m):
    """A witness threshold: beyond it every operator (c z, z) passes the
    Hodge-Riemann pattern with the signs of the zero-side stalk."""
    opp = opposite_signs_report(m)
    if not opp["holds"]:
        raise HRHypothesisFails("limit scan requires opposite signs")
    if not m.sec_degrees:
        return {"c0": Fraction(1), "signs_match": True}
    dets = []
    for d in range(min(m.sec_degrees), 1):
        idx = [j for j, dj in enumerate(m.sec_degrees) if dj <= d]
        if not idx:
            continue
        mat = m.ample_matrix(d, idx)
        det = linalg.bareiss_det(mat, lambda a, b: a * b, lambda a, b: a - b,
                                 lambda a, b: a.exact_div(b), UniPoly.one())
        if det.is_zero():
            raise HRHypothesisFails("identically degenerate degree")
        dets.append(det)
    c0 = Fraction(1)
    if any(sturm_roots_in_interval(det, c0, None) for det in dets):
        bound = max(cauchy_root_bound(det) for det in dets)
        c0 = Fraction(int(bound) + 1)
        while c0 > 1 and not any(sturm_roots_in_interval(det, c0 - 1, None)
                                 for det in dets):
            c0 -= 1
    # signs at a sample beyond the threshold must match the zero-side stalk
    lat0 = m.lattice0()
    eps0 = hodge.hodge_riemann_report(lat0, 0).epsilon if lat0.rank else 1
    sample = c0 + 1
    pattern = _signature_pattern(m, sample, 1)
    want = _expected_signatures(m, eps0)
    match = all(p - n == want[d] for d, p, n in pattern)
    return {"c0": c0, "signs_match": match}


# ---------------------------------------------------------------------------
# structure theory
# ---------------------------------------------------------------------------

def classify_and_decompose(m):
    """Split off the skyscraper part, then the constant parts per degree.

    Requires both polarisation forms to satisfy Hodge-Riemann.  Returns the
    graded pieces and verifies the rank bookkeeping for the sections
    (zero-side rank plus v^2 times the infinity-side rank).
    """
    lat0 = m.lattice0()
    latinf = m.latticeinf()
    if lat0.rank:
        if not hodge.hodge_riemann_report(lat0, 0).hr_holds:
            raise HRHypothesisFails("zero-side form fails Hodge-Riemann")
    if latinf.rank:
        if not hodge.hodge_riemann_report(latinf, 0).hr_holds:
            raise HRHypothesisFails("infinity-side form fails Hodge-Riemann")
    sky = {}
    const = {}
    blocks0 = hodge.primitive_blocks(lat0) if lat0.rank else []
    blocksinf = {b["degree"]: b for b in (hodge.primitive_blocks(latinf)
                                          if latinf.rank else [])}
    mc = m.mcstar_dimensions()
    for b in blocks0:
        d = b["degree"]
        if not b["basis"]:
            continue
        # flatten primitive vectors into full zero-side slot coordinates and
        # count how many survive in the boundary module (the rest split off
        # as skyscraper summands)
        idx = b["indices"]
        slots = m._slots(d)
        lrows = m._section_rows(d, slots)
        mat = []
        for v in b["basis"]:
            vec = [Fraction(0)] * len(slots)
            for pos, (side, i) in enumerate(slots):
                if side == 0 and i in idx:
                    vec[pos] = v[idx.index(i)]
            mat.append(vec)
        combined = [list(r) for r in lrows]
        base_rank = linalg.rank(combined)
        indep = 0
        rows = list(combined)
        for vec in mat:
            rows.append(vec)
            r = linalg.rank(rows)
            if r == base_rank:
                rows.pop()
            else:
                base_rank = r
                indep += 1
        kernel_dim = len(b["basis"]) - indep
        if kernel_dim:
            sky[d] = kernel_dim
        if indep:
            const[d] = indep
    # match against the infinity-side primitives and the boundary module
    for d, cnt in const.items():
        binf = blocksinf.get(d)
        got = len(binf["basis"]) if binf else 0
        if got != cnt:
            raise HRHypothesisFails(
                f"constant part mismatch at degree {d}: {cnt} vs {got}")
        if mc.get(d, 0) != cnt:
            raise HRHypothesisFails(
                f"boundary dimension mismatch at degree {d}")
    # rank bookkeeping: the section rank generating data
    counts0 = {}
    for d in m.m0_degrees:
        counts0[d] = counts0.get(d, 0) + 1
    expect0 = {}
    for d, c in sky.items():
        expect0[d] = expect0.get(d, 0) + c
    for d, c in const.items():
        expect0[d] = expect0.get(d, 0) + c
    if expect0 != counts0:
        raise HRHypothesisFails("skyscraper + constant ranks do not fill M_0")
    return {"skyscraper": sky, "constant": const,
            "mcstar": mc, "rank0": counts0}


def section_rank_law(m):
    """Graded section rank equals rank(M_0) + v^2 rank(M_inf)."""
    got = {}
    for d in m.sec_degrees:
        got[d] = got.get(d, 0) + 1
    want = {}
    for d in m.m0_degrees:
        want[d] = want.get(d, 0) + 1
    for d in m.minf_degrees:
        want[d + 2] = want.get(d + 2, 0) + 1
    return got == want
