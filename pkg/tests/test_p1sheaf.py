import itertools
import random
from fractions import Fraction

import pytest

from soergel import hodge, p1sheaf
from soergel.bimodule import BottSamelson, build_factorization, deformed_gamma
from soergel.errors import HRHypothesisFails, NotP1Sheaf
from soergel.polynomial import Poly

from helpers import all_words


def test_axioms_on_models():
    sky = p1sheaf.skyscraper([-3, -1], [[Fraction(2), 0], [0, Fraction(-1)]])
    assert sky.mcstar_dimensions() == {}
    const = p1sheaf.rank_one_constant(-2, 1, -1)
    assert const.mcstar_dimensions() == {-2: 1}
    assert p1sheaf.section_rank_law(sky)
    assert p1sheaf.section_rank_law(const)


def test_axioms_reject_bad_data():
    # a "constant sheaf" missing its z-section is not a sheaf here
    with pytest.raises(NotP1Sheaf):
        p1sheaf.P1Sheaf([-2], [[1]], [-2], [[-1]],
                        [-2], [[1]], [[1]])
    # degenerate section lattice
    with pytest.raises(NotP1Sheaf):
        p1sheaf.P1Sheaf([-2], [[1]], [-2], [[-1]],
                        [-2, -2], [[1], [1]], [[1], [1]])


def test_example_grid_closed_forms():
    # rank-one constant sheaves: the published case analysis on a grid
    for lam0, laminf in itertools.product((-3, -2, -1, 1, 2, 3), repeat=2):
        for m in (-2, -4):
            sheaf = p1sheaf.rank_one_constant(m, lam0, laminf)
            same = (lam0 > 0) == (laminf > 0)
            expect_hl = same or abs(lam0) >= abs(laminf)
            expect_hr = (not same) and abs(lam0) >= abs(laminf)
            assert p1sheaf.hl_ample_report(sheaf)["holds"] == expect_hl
            assert p1sheaf.hr_ample_report(sheaf)["holds"] == expect_hr


def test_boundary_case_wall_degeneration():
    # equal absolute weights: the open cone passes but the wall point fails
    sheaf = p1sheaf.rank_one_constant(-2, 1, -1)
    assert p1sheaf.hl_ample_report(sheaf)["holds"]
    assert not p1sheaf.hl_at_gamma(sheaf, 1, 1)
    strict = p1sheaf.rank_one_constant(-2, 2, -1)
    assert p1sheaf.hl_at_gamma(strict, 1, 1)


def test_same_sign_fails_hr_by_signature():
    sheaf = p1sheaf.rank_one_constant(-2, 1, 1)
    assert p1sheaf.hl_ample_report(sheaf)["holds"]
    assert not p1sheaf.hr_ample_report(sheaf)["holds"]


def test_structure_algebra_action(a2):
    # degree-2 pairs act on sections, and the induced form is self-adjoint
    bs = BottSamelson(a2, (0, 1))
    w0 = a2.longest_element()
    m = None
    for x in a2.elements:
        s = a2.simple(1)
        if a2.length_of(x * s) > x.length and bs.stalk(x) is not None:
            m = p1sheaf.sheaf_from_bimodule(bs, x, 1, (1, 1))
            break
    assert m is not None
    a, b = Fraction(3), Fraction(2)
    # gamma * section lies in the section span one degree up
    for j, dj in enumerate(m.sec_degrees):
        k = dj + 2
        slots = m._slots(k)
        rows = m._section_rows(k, slots)
        vec = []
        for side, i in slots:
            c = m.sec0[j][i] if side == 0 else m.secinf[j][i]
            vec.append(c * (a if side == 0 else b))
        from soergel import linalg
        assert linalg.in_span(rows, vec)
    # self-adjointness of the operator for the induced pairing
    idx = list(range(len(m.sec_degrees)))
    for i in idx:
        for j in idx:
            lhs = a * m.section_pair_coeff(i, j, 0) + b * m.section_pair_coeff(i, j, 1)
            rhs = a * m.section_pair_coeff(j, i, 0) + b * m.section_pair_coeff(j, i, 1)
            assert lhs == rhs


def test_classification_models():
    sky = p1sheaf.skyscraper([-3, -1], [[Fraction(2), 0], [0, Fraction(-1)]])
    out = p1sheaf.classify_and_decompose(sky)
    assert out["constant"] == {} and out["skyscraper"] == {-3: 1, -1: 1}
    const = p1sheaf.rank_one_constant(-2, 1, -1)
    out = p1sheaf.classify_and_decompose(const)
    assert out["skyscraper"] == {} and out["constant"] == {-2: 1}
    mixed = p1sheaf.direct_sum([sky, const])
    out = p1sheaf.classify_and_decompose(mixed)
    assert out["skyscraper"] == {-3: 1, -1: 1} and out["constant"] == {-2: 1}


def test_classification_requires_hr():
    bad = p1sheaf.constant_sheaf([-4, -2], [[Fraction(1), 0], [0, Fraction(1)]])
    # the zero-side form is (+,+) across degrees -4, -2: fails Hodge-Riemann
    with pytest.raises(HRHypothesisFails):
        p1sheaf.classify_and_decompose(bad)


def test_classification_rank_bookkeeping(a3):
    bs = BottSamelson(a3, a3.parse_word("tsut"))
    x = a3.element_from_word((0,))
    m = p1sheaf.sheaf_from_bimodule(bs, x, 1, (1, 1, 1))
    out = p1sheaf.classify_and_decompose(m)
    total = sum(out["skyscraper"].values()) + sum(out["constant"].values())
    assert total == m.rank0


def test_limit_scan_models():
    const = p1sheaf.rank_one_constant(-2, 1, -1)
    scan = p1sheaf.limit_scan(const)
    assert scan["c0"] == 1 and scan["signs_match"]
    sky = p1sheaf.skyscraper([-2], [[Fraction(1)]])
    scan = p1sheaf.limit_scan(sky)
    assert scan["c0"] == 1 and scan["signs_match"]
    # a dominated pair needs a positive threshold: (v,v)^0 = 1, (v,v)^inf = -2
    m = p1sheaf.rank_one_constant(-2, 1, -2)
    scan = p1sheaf.limit_scan(m)
    assert scan["c0"] >= 2 and scan["signs_match"]


def test_normalized_constant_model_criterion():
    # sections pass Hodge-Riemann at the wall exactly when the sum of the
    # two forms is definite with the zero-side sign
    rng = random.Random(77)
    for _ in range(20):
        n = rng.randint(1, 3)
        d0 = [[Fraction(0)] * n for _ in range(n)]
        dinf = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            d0[i][i] = Fraction(rng.randint(1, 4))
            dinf[i][i] = Fraction(-rng.randint(1, 4))
        m = p1sheaf.constant_sheaf([-4] * n, d0, dinf)
        total = [[d0[i][j] + dinf[i][j] for j in range(n)] for i in range(n)]
        definite_pos = all(hodge.signature([[total[i][i]]]) == (1, 0)
                           for i in range(n)) and \
            all(total[i][i] > 0 for i in range(n))
        assert p1sheaf.hr_at_gamma(m, 1, 1) == definite_pos


def test_sheaf_invariants_from_bimodules(a2):
    for word in all_words(2, 3):
        bs = BottSamelson(a2, word)
        for s_letter in range(2):
            s = a2.simple(s_letter)
            for x in a2.elements:
                if a2.length_of(x * s) <= x.length:
                    continue
                if bs.stalk(x) is None and bs.stalk(x * s) is None:
                    continue
                m = p1sheaf.sheaf_from_bimodule(bs, x, s_letter, (1, 1))
                assert p1sheaf.section_rank_law(m)


def test_isometry_with_extended_stalk(a2):
    # the sections of the edge sheaf carry exactly the specialised local
    # form of the one-letter-longer bimodule
    cw = (1, 1)
    for word in [(0,), (0, 1), (1, 0, 1)]:
        bs = BottSamelson(a2, word)
        for s_letter in range(2):
            s = a2.simple(s_letter)
            bigger = BottSamelson(a2, word + (s_letter,))
            for x in a2.elements:
                if a2.length_of(x * s) <= x.length:
                    continue
                if bs.stalk(x) is None and bs.stalk(x * s) is None:
                    continue
                m = p1sheaf.sheaf_from_bimodule(bs, x, s_letter, cw)
                st = bigger.stalk(x)
                assert st is not None and st.rank == len(m.sec_degrees)
                assert tuple(st.degrees) == tuple(m.sec_degrees)
                for i in range(st.rank):
                    for j in range(st.rank):
                        coeff, _ = st.gram[i][j].sigma_monomial(cw)
                        got = m.section_pair_coeff(i, j, 0) + \
                            m.section_pair_coeff(i, j, 1)
                        assert got == coeff


def _pair_image(group, bs_z, s_letter, x, elem):
    """Image of an extended-word element in the stalk pair at (x, xs)."""
    rank = group.rank
    s = group.simple(s_letter)
    sign, root = group.root_image(x, [int(i == s_letter) for i in range(rank)])
    xalpha = Poly.linear(root) * sign
    st_x = bs_z.stalk(x)
    st_xs = bs_z.stalk(x * s)
    nx = st_x.rank if st_x else 0
    nxs = st_xs.rank if st_xs else 0
    vx = [Poly.zero(rank)] * nx
    vxs = [Poly.zero(rank)] * nxs
    for mask, c in elem.items():
        prefix, bit = mask[:-1], mask[-1]
        row_x = st_x.images[bs_z.mask_index[prefix]] if st_x else ()
        row_xs = st_xs.images[bs_z.mask_index[prefix]] if st_xs else ()
        if bit == 0:
            for k in range(nx):
                vx[k] = vx[k] + c * row_x[k]
            for k in range(nxs):
                vxs[k] = vxs[k] + c * row_xs[k]
        else:
            for k in range(nx):
                vx[k] = vx[k] + c * xalpha * row_x[k]
    return vx, vxs


def test_weak_lefschetz_transfer(a2):
    # deformed factorization data transported to the moment graph: target
    # Hodge-Riemann at the produced operator forces source hard Lefschetz
    rho = Poly.linear(a2.realisation.rho())
    cw = (1, 1)
    checked = 0
    for z_word, s_letter in (((0,), 1), ((1,), 0), ((0, 1), 0)):
        for a in (0, Fraction(1, 2), Fraction(3, 4)):
            datum = build_factorization(a2, z_word, rho, mode="deformed",
                                        s_letter=s_letter, a=a)
            full_word = datum.source_word
            bs_z = BottSamelson(a2, z_word)
            bs_full = BottSamelson(a2, full_word)
            s = a2.simple(s_letter)
            composite = datum.composite()
            y = a2.element_from_word(z_word)
            ys = y * s
            for x in a2.elements:
                xs = x * s
                if a2.length_of(xs) <= x.length:
                    continue
                if bs_z.stalk(x) is None and bs_z.stalk(xs) is None:
                    continue
                # the composite acts on the two stalk components by the
                # twisted weights
                lam = datum.lam
                g0 = a2.act_poly(x, lam) - a * a2.act_poly(xs, lam) \
                    - (1 - a) * a2.act_poly(ys, lam)
                ginf = a2.act_poly(xs, lam) - a * a2.act_poly(xs, lam) \
                    - (1 - a) * a2.act_poly(ys, lam)
                for col, mask in enumerate(bs_full.masks):
                    elem = {}
                    for row, mask_r in enumerate(bs_full.masks):
                        c = composite[row][col]
                        if not c.is_zero():
                            elem[mask_r] = c
                    got_x, got_xs = _pair_image(a2, bs_z, s_letter, x, elem)
                    base_x, base_xs = _pair_image(a2, bs_z, s_letter, x,
                                                  bs_full.basis_elem(mask))
                    assert got_x == [g0 * b for b in base_x]
                    assert got_xs == [ginf * b for b in base_xs]
                lam0, laminf = deformed_gamma(a2, datum, x, cw)
                assert 0 < laminf < lam0  # inside the ample cone
                # target: skyscraper on the z-word stalk plus scaled edges
                targets = []
                st = bs_z.stalk(x)
                if st is not None and st.rank:
                    lat = hodge.specialize_stalk(st, cw)
                    targets.append(p1sheaf.skyscraper(lat.degrees, lat.coeffs))
                for word_c, scale in datum.components:
                    bs_c = BottSamelson(a2, word_c)
                    if bs_c.stalk(x) is None and bs_c.stalk(xs) is None:
                        continue
                    mc = p1sheaf.sheaf_from_bimodule(bs_c, x, s_letter, cw)
                    scaled = p1sheaf.P1Sheaf(
                        mc.m0_degrees,
                        [[scale * v for v in row] for row in mc.form0],
                        mc.minf_degrees,
                        [[scale * v for v in row] for row in mc.forminf],
                        mc.sec_degrees, mc.sec0, mc.secinf, check=False)
                    targets.append(scaled)
                target = p1sheaf.direct_sum(targets)
                source = p1sheaf.sheaf_from_bimodule(bs_z, x, s_letter, cw)
                premise = p1sheaf.hr_at_gamma(target, lam0, laminf)
                conclusion = p1sheaf.hl_at_gamma(source, lam0, laminf)
                if premise:
                    checked += 1
                    assert conclusion
    assert checked > 0


def test_deformed_ratios_cover_the_cone(a2):
    # the achieved weight ratios approach one near the wall and grow without
    # bound as the deformation parameter approaches one
    cw = (1, 1)
    x = a2.identity
    rho = Poly.linear(a2.realisation.rho())
    # fundamental weight dual to the non-deformed letter: on the s-wall
    mu = Poly.linear((Fraction(1, 3) * 2, Fraction(1, 3)))
    assert a2.realisation.pair_with_coroot(mu.linear_coords(), 1) == 0
    ratios_wall = []
    for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 10), Fraction(1, 100)):
        lam = mu + rho * eps
        datum = build_factorization(a2, (0,), lam, mode="deformed",
                                    s_letter=1, a=0)
        lam0, laminf = deformed_gamma(a2, datum, x, cw)
        ratios_wall.append(lam0 / laminf)
    assert all(r > 1 for r in ratios_wall)
    assert ratios_wall == sorted(ratios_wall, reverse=True)
    assert ratios_wall[-1] < Fraction(11, 10)
    ratios_a = []
    for a in (0, Fraction(1, 2), Fraction(9, 10), Fraction(99, 100)):
        datum = build_factorization(a2, (0,), rho, mode="deformed",
                                    s_letter=1, a=a)
        lam0, laminf = deformed_gamma(a2, datum, x, cw)
        ratios_a.append(lam0 / laminf)
    assert ratios_a == sorted(ratios_a)
    assert ratios_a[-1] > 50
