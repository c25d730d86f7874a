"""Finite simply-laced Coxeter systems and their reflection representation.

A realisation is stored through its pairing matrix <alpha_a, alpha_b^vee>
(entries 2 on the diagonal, 0 or -1 off it).  Group elements are identified
with their exact rational matrices acting on the span of the simple roots;
the action is reflection faithful for the supported types, so matrix equality
is element equality.  Because the pairing matrix is symmetric, the same
matrix describes the action on roots and on coroots.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import linalg
from .errors import InfiniteGroup, NonReducedWord
from .polynomial import Poly, RatFunc, root_key

GENERATOR_NAMES = "stuvwxyz"


def _letter(i):
    return GENERATOR_NAMES[i] if i < len(GENERATOR_NAMES) else f"s{i}"


class Realisation:
    """Rank, pairing matrix and generator names of a simply-laced system."""

    def __init__(self, pairing, names=None):
        self.pairing = tuple(tuple(Fraction(v) for v in row) for row in pairing)
        self.rank = len(self.pairing)
        for a in range(self.rank):
            if self.pairing[a][a] != 2:
                raise ValueError("diagonal pairing must be 2")
            for b in range(self.rank):
                if a != b and self.pairing[a][b] not in (0, -1):
                    raise ValueError("only simply-laced pairings are supported")
                if self.pairing[a][b] != self.pairing[b][a]:
                    raise ValueError("pairing must be symmetric for these types")
        self.names = tuple(names) if names else tuple(_letter(i) for i in range(self.rank))
        self.gen_names = tuple(f"a_{n}" for n in self.names)

    @classmethod
    def from_type(cls, label):
        """Build from a type string such as "A3", "A2xA1" or "D4"."""
        blocks = []
        for part in label.split("x"):
            part = part.strip()
            if len(part) < 2 or part[0] not in "AD":
                raise ValueError(f"unsupported type component {part!r}")
            n = int(part[1:])
            if n < 1 or (part[0] == "D" and n < 4):
                raise ValueError(f"unsupported type component {part!r}")
            edges = [(i, i + 1) for i in range(n - 1)]
            if part[0] == "D":
                edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
            blocks.append((n, edges))
        rank = sum(n for n, _ in blocks)
        pairing = [[0] * rank for _ in range(rank)]
        off = 0
        for n, edges in blocks:
            for i in range(n):
                pairing[off + i][off + i] = 2
            for i, j in edges:
                pairing[off + i][off + j] = -1
                pairing[off + j][off + i] = -1
            off += n
        return cls(pairing)

    def index_of(self, name):
        return self.names.index(name)

    def pair_with_coroot(self, coords, b):
        """<lambda, alpha_b^vee> for lambda given in simple-root coordinates."""
        return sum(Fraction(c) * self.pairing[a][b] for a, c in enumerate(coords))

    def pair_with_coweight(self, coords, coweight):
        """<lambda, cw> where the coweight is its vector of simple pairings."""
        return sum(Fraction(c) * Fraction(w) for c, w in zip(coords, coweight))

    def rho(self):
        """The dominant weight with <rho, alpha_s^vee> = 1 for every s."""
        rows = [[self.pairing[a][b] for a in range(self.rank)] for b in range(self.rank)]
        sol = linalg.solve(rows, [Fraction(1)] * self.rank)
        return tuple(sol)

    def default_coweight(self):
        return (Fraction(1),) * self.rank

    def simple_matrix(self, i):
        """Matrix of the simple reflection on root coordinates (columns = images)."""
        n = self.rank
        m = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
        for a in range(n):
            m[i][a] -= self.pairing[a][i]
        return tuple(tuple(row) for row in m)


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def _mat_vec(m, v):
    return tuple(sum(m[i][j] * Fraction(v[j]) for j in range(len(v))) for i in range(len(m)))


class CoxeterElement:
    """Group element, canonically the matrix of its action on root coordinates."""

    __slots__ = ("group", "matrix")

    def __init__(self, group, matrix):
        self.group = group
        self.matrix = matrix

    def __eq__(self, other):
        return isinstance(other, CoxeterElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __mul__(self, other):
        return self.group._element(_mat_mul(self.matrix, other.matrix))

    def inverse(self):
        inv = linalg.inverse([list(r) for r in self.matrix])
        return self.group._element(tuple(tuple(row) for row in inv))

    def apply_to_coords(self, coords):
        return _mat_vec(self.matrix, coords)

    @property
    def length(self):
        return self.group.length_of(self)

    @property
    def word(self):
        return self.group.reduced_word(self)

    @property
    def name(self):
        w = self.word
        return "id" if not w else "".join(self.group.realisation.names[i] for i in w)

    def __repr__(self):
        return f"<{self.name}>"


class CoxeterGroup:
    """Enumerated finite Coxeter group with Bruhat order and root data."""

    def __init__(self, realisation, max_size=100000):
        if isinstance(realisation, str):
            realisation = Realisation.from_type(realisation)
        self.realisation = realisation
        self.rank = realisation.rank
        self._elements_by_matrix = {}
        self._length = {}
        self._word = {}
        n = self.rank
        ident = tuple(tuple(Fraction(int(a == b)) for b in range(n)) for a in range(n))
        self.identity = self._register(ident, 0, ())
        self._simple_matrices = [realisation.simple_matrix(i) for i in range(n)]
        self._enumerate(max_size)
        self._simple = [self._element(m) for m in self._simple_matrices]
        self._roots()
        self._bruhat_cache = {}

    # -- construction ------------------------------------------------------

    def _register(self, matrix, length, word):
        el = CoxeterElement(self, matrix)
        self._elements_by_matrix[matrix] = el
        self._length[matrix] = length
        self._word[matrix] = word
        return el

    def _element(self, matrix):
        el = self._elements_by_matrix.get(matrix)
        if el is None:
            raise KeyError("matrix outside the enumerated group (arithmetic bug?)")
        return el

    def _enumerate(self, max_size):
        frontier = [self.identity]
        while frontier:
            new = []
            for el in frontier:
                for i in range(self.rank):
                    m = _mat_mul(el.matrix, self._simple_matrices[i])
                    if m not in self._elements_by_matrix:
                        self._register(m, self._length[el.matrix] + 1,
                                       self._word[el.matrix] + (i,))
                        new.append(self._elements_by_matrix[m])
                        if len(self._elements_by_matrix) > max_size:
                            raise InfiniteGroup(f"closure exceeded {max_size} elements")
            frontier = new
        self.elements = sorted(self._elements_by_matrix.values(),
                               key=lambda e: (self._length[e.matrix], self._word[e.matrix]))

    def _roots(self):
        seen = {}
        frontier = []
        for i in range(self.rank):
            coords = tuple(Fraction(int(j == i)) for j in range(self.rank))
            seen[coords] = coords  # root -> coroot coordinates
            frontier.append((coords, coords))
        while frontier:
            new = []
            for root, coroot in frontier:
                for i in range(self.rank):
                    m = self._simple[i].matrix
                    r2, c2 = _mat_vec(m, root), _mat_vec(m, coroot)
                    if r2 not in seen:
                        seen[r2] = c2
                        new.append((r2, c2))
            frontier = new
        pos = [r for r in seen if all(c >= 0 for c in r)]
        pos.sort(key=root_key)
        self.positive_roots = tuple(pos)
        self.positive_coroots = tuple(seen[r] for r in pos)
        self._reflections = {}
        for root, coroot in zip(pos, self.positive_coroots):
            n = self.rank
            cols = []
            for a in range(n):
                alpha_a = [Fraction(int(j == a)) for j in range(n)]
                pair = sum(self.realisation.pairing[a][b] * coroot[b] for b in range(n))
                cols.append(tuple(alpha_a[j] - pair * root[j] for j in range(n)))
            matrix = tuple(tuple(cols[a][b] for a in range(n)) for b in range(n))
            self._reflections[root] = self._element(matrix)

    # -- basic queries -----------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def simple(self, i):
        return self._simple[i]

    def length_of(self, el):
        return self._length[el.matrix]

    def reduced_word(self, el):
        return self._word[el.matrix]

    def element_from_word(self, word):
        el = self.identity
        for i in word:
            el = el * self._simple[i]
        return el

    def parse_word(self, text):
        """Letters like "tsut" to generator indices."""
        if text in ("", "id", "e"):
            return ()
        return tuple(self.realisation.index_of(ch) for ch in text)

    def is_reduced(self, word):
        return self.length_of(self.element_from_word(word)) == len(word)

    def reduced_words_of_length(self, length):
        """All reduced words of the given length, lexicographic order."""
        out = []
        def rec(word, el):
            if len(word) == length:
                out.append(tuple(word))
                return
            for i in range(self.rank):
                nxt = el * self._simple[i]
                if self.length_of(nxt) == len(word) + 1:
                    word.append(i)
                    rec(word, nxt)
                    word.pop()
        rec([], self.identity)
        return out

    def reflection(self, root):
        return self._reflections[tuple(root)]

    def reflections(self):
        return [self._reflections[r] for r in self.positive_roots]

    def longest_element(self):
        return self.elements[-1]

    # -- Bruhat order ------------------------------------------------------

    def bruhat_leq(self, x, y):
        """Subexpression criterion against the cached reduced word of y."""
        key = (x.matrix, y.matrix)
        if key in self._bruhat_cache:
            return self._bruhat_cache[key]
        reachable = {self.identity}
        for i in self.reduced_word(y):
            s = self._simple[i]
            reachable |= {u * s for u in reachable}
        for u in reachable:
            self._bruhat_cache[(u.matrix, y.matrix)] = True
        result = x in reachable
        self._bruhat_cache[key] = result
        return result

    def bruhat_lower_set(self, y):
        return [x for x in self.elements if self.bruhat_leq(x, y)]

    def left_inversion_reflections(self, y):
        """Reflections t with ty < y; in bijection with inversion roots."""
        yinv = y.inverse()
        out = []
        for root in self.positive_roots:
            img = yinv.apply_to_coords(root)
            if all(c <= 0 for c in img):
                out.append((self._reflections[root], root))
        assert len(out) == self.length_of(y)
        return out

    def inversion_count(self, el):
        c = 0
        for root in self.positive_roots:
            img = el.apply_to_coords(root)
            if all(v <= 0 for v in img):
                c += 1
        return c

    def refine_bruhat_by_rho(self, x, w, rho=None, coweight=None):
        """The pair (<x(rho), cw>, <w(rho), cw>); strictly decreasing along Bruhat."""
        rho = self.realisation.rho() if rho is None else rho
        coweight = self.realisation.default_coweight() if coweight is None else coweight
        a = self.realisation.pair_with_coweight(x.apply_to_coords(rho), coweight)
        b = self.realisation.pair_with_coweight(w.apply_to_coords(rho), coweight)
        return a, b

    # -- coweight tests ----------------------------------------------------

    def is_regular_coweight(self, coweight):
        return all(self.realisation.pair_with_coweight(r, coweight) != 0
                   for r in self.positive_roots)

    def is_dominant_coweight(self, coweight):
        return all(Fraction(c) > 0 for c in coweight)

    # -- polynomial actions ------------------------------------------------

    def act_poly(self, el, f):
        images = [Poly.linear([el.matrix[a][i] for a in range(self.rank)])
                  for i in range(self.rank)]
        return f.substitute_linear(images)

    def act_ratfunc(self, el, f):
        num = self.act_poly(el, f.num)
        sign = 1
        den = []
        for r in f.den:
            img = el.apply_to_coords(r)
            if all(c >= 0 for c in img):
                den.append(tuple(int(c) for c in img))
            else:
                sign = -sign
                den.append(tuple(int(-c) for c in img))
        return RatFunc(num if sign > 0 else -num, den)

    def act(self, el, f):
        if isinstance(f, RatFunc):
            return self.act_ratfunc(el, f)
        return self.act_poly(el, f)

    def root_image(self, el, coords):
        """(sign, positive-root coordinates) of the image of a root."""
        img = el.apply_to_coords(coords)
        if all(c >= 0 for c in img):
            return 1, tuple(int(c) for c in img)
        return -1, tuple(int(-c) for c in img)

    def divided_difference(self, i, f):
        """(f - s_i(f)) / alpha_i; exact by construction."""
        diff = f - self.act_poly(self._simple[i], f)
        alpha = Poly.generator(self.rank, i)
        q = diff.divide_exact(alpha)
        if q is None:
            raise ArithmeticError("divided difference left a remainder")
        return q

    def alpha(self, i):
        return Poly.generator(self.rank, i)

    def root_poly(self, coords):
        return Poly.linear(coords)
