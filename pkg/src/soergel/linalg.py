"""Exact linear algebra over the rationals (and small helpers over Q[z]).

Everything is deterministic: pivots are chosen by first-nonzero position, so
repeated runs give identical bases, kernels and decompositions.
"""

from __future__ import annotations

from fractions import Fraction


def _copy(rows):
    return [list(map(Fraction, r)) for r in rows]


def rref(rows):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    m = _copy(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows):
    return len(rref(rows)[1])


def in_span(rows, vec):
    """Is vec in the row span of rows?"""
    return rank(rows) == rank(list(rows) + [list(vec)])


def solve(a_rows, b):
    """One exact solution x of A x = b, or None.  Free variables are set to 0."""
    if not a_rows:
        return [] if all(v == 0 for v in b) else None
    ncols = len(a_rows[0])
    aug = [list(map(Fraction, row)) + [Fraction(b[i])] for i, row in enumerate(a_rows)]
    m, pivots = rref(aug)
    for row in m:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [Fraction(0)] * ncols
    r = 0
    for c in pivots:
        if c == ncols:
            return None
        x[c] = m[r][-1]
        r += 1
    return x


def kernel(rows):
    """Basis of the right kernel {x : A x = 0}, deterministic order."""
    if not rows:
        return []
    ncols = len(rows[0])
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def det(rows):
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = _copy(rows)
    sign = 1
    d = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        pv = m[c][c]
        d *= pv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * d


def inverse(rows):
    """Exact inverse, or None if singular."""
    n = len(rows)
    aug = [list(map(Fraction, rows[i])) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    m, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in m]


def bareiss_det(rows, mul, sub, exact_div, one):
    """Fraction-free determinant for entries in an integral domain.

    The caller supplies ring operations; ``exact_div`` must perform the exact
    divisions that the Bareiss recurrence guarantees.
    """
    n = len(rows)
    if n == 0:
        return one
    m = [list(r) for r in rows]
    sign = 1
    prev = one
    for k in range(n - 1):
        pr = next((i for i in range(k, n) if m[i][k]), None)
        if pr is None:
            return sub(one, one)  # zero of the ring
        if pr != k:
            m[k], m[pr] = m[pr], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j]))
                m[i][j] = exact_div(num, prev)
            m[i][k] = sub(one, one)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    if sign < 0:
        d = sub(sub(one, one), d)
    return d
