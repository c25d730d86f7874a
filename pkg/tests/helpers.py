"""Shared random generators and small oracles for the test suite."""

import random
from fractions import Fraction

from soergel.polynomial import Poly


def rand_poly(rng, nvars, max_half_degree=3, terms=4):
    """Random polynomial with small integer coefficients."""
    out = Poly.zero(nvars)
    for _ in range(rng.randint(1, terms)):
        expo = [0] * nvars
        for _ in range(rng.randint(0, max_half_degree)):
            expo[rng.randrange(nvars)] += 1
        c = rng.randint(-3, 3)
        if c:
            out = out + Poly(nvars, {tuple(expo): c})
    return out


def rand_homogeneous(rng, nvars, half_degree):
    out = Poly.zero(nvars)
    for _ in range(rng.randint(1, 4)):
        expo = [0] * nvars
        for _ in range(half_degree):
            expo[rng.randrange(nvars)] += 1
        c = rng.randint(-3, 3)
        if c:
            out = out + Poly(nvars, {tuple(expo): c})
    return out


def rand_bs_element(rng, bs, density=0.6):
    """Random left combination of basis masks with small coefficients."""
    out = {}
    for mask in bs.masks:
        if rng.random() > density:
            continue
        c = Poly.constant(bs.rank, rng.randint(-2, 2))
        if rng.random() < 0.4:
            c = c * Poly.generator(bs.rank, rng.randrange(bs.rank))
        if c:
            out[mask] = c
    return out


def bruhat_cover_closure(group):
    """Transitive closure of the reflection-cover relation; Bruhat oracle."""
    leq = {(x, x) for x in group.elements}
    covers = []
    for x in group.elements:
        for t in group.reflections():
            y = t * x
            if group.length_of(y) > group.length_of(x):
                covers.append((x, y))
    changed = True
    leq |= set(covers)
    while changed:
        changed = False
        for (a, b) in list(leq):
            for (c, d) in covers:
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return leq


def all_words(rank, max_length):
    import itertools
    out = []
    for length in range(max_length + 1):
        out.extend(itertools.product(range(rank), repeat=length))
    return out


def jacobi_signature(matrix):
    """Leading-principal-minor signature count; None when not applicable."""
    from soergel import linalg
    n = len(matrix)
    minors = [Fraction(1)]
    for k in range(1, n + 1):
        d = linalg.det([row[:k] for row in matrix[:k]])
        if d == 0:
            return None
        minors.append(d)
    plus = sum(1 for k in range(1, n + 1) if minors[k] * minors[k - 1] > 0)
    return plus, n - plus
