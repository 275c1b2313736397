"""Weyl groups, parabolic quotients and the boundary characters chi_w.

Elements are stored by their exact integer action matrix on the
fundamental-weight basis; reduced words are the lexicographically minimal
ones (found by breadth-first closure, cross-checkable by greedy descent).
Words render as "s1 s2 s1", the identity as "e".
"""

from dataclasses import dataclass
from fractions import Fraction

from .root_system import RootSystem, Weight, CartanPoint

__all__ = [
    "WeylElement", "WeylGroup", "ParabolicContext",
    "enumerate_weyl", "get_weyl_group", "minimal_reps", "chi", "s_matrix",
    "render_word",
]

DEFAULT_GROUP_BOUND = 10 ** 6


def render_word(word):
    return "e" if not word else " ".join(f"s{i}" for i in word)


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element: integer matrix on the fundamental-weight basis
    plus its lexicographically minimal reduced word (1-indexed generators)."""
    matrix: tuple
    word: tuple

    @property
    def length(self):
        return len(self.word)

    def act(self, w: Weight) -> Weight:
        return Weight(tuple(
            sum(row[j] * w.coords[j] for j in range(len(row)) if row[j])
            for row in self.matrix))

    def act_fund(self, coords):
        """Action on an integer vector of fundamental coordinates."""
        return tuple(sum(row[j] * coords[j] for j in range(len(row)) if row[j])
                     for row in self.matrix)

    def __repr__(self):
        return f"W[{render_word(self.word)}]"

    def __str__(self):
        return render_word(self.word)


def _simple_matrices(rs: RootSystem):
    n = rs.rank
    mats = []
    for k in range(n):
        # s_k: f |-> f - f_k * (fundamental coordinates of alpha_k)
        mats.append(tuple(tuple((1 if i == j else 0) - (rs.cartan[i][k] if j == k else 0)
                                for j in range(n)) for i in range(n)))
    return tuple(mats)


def _matmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n) if a[i][k])
                       for j in range(n)) for i in range(n))


class WeylGroup:
    """The full Weyl group of a root system, enumerated once and indexed by matrix."""

    def __init__(self, rs: RootSystem, bound=DEFAULT_GROUP_BOUND):
        self.rs = rs
        n = rs.rank
        self.simple_matrices = _simple_matrices(rs)
        self.identity_matrix = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

        # fundamental coordinates of every root, for sign lookups
        self.roots_fund = {}
        for r in rs.positive_roots:
            f = tuple(sum(rs.cartan[i][j] * r[j] for j in range(n)) for i in range(n))
            self.roots_fund[f] = (1, r)
            self.roots_fund[tuple(-x for x in f)] = (-1, r)
        self.pos_roots_fund = tuple(
            tuple(sum(rs.cartan[i][j] * r[j] for j in range(n)) for i in range(n))
            for r in rs.positive_roots)

        # breadth-first closure; words are appended on the right in ascending
        # generator order, so the first word reaching an element is its
        # lexicographically minimal reduced word
        seen = {self.identity_matrix: ()}
        level = [(self.identity_matrix, ())]
        ordered = [(self.identity_matrix, ())]
        while level:
            nxt = []
            for mat, word in level:
                for k in range(n):
                    m2 = _matmul(mat, self.simple_matrices[k])
                    if m2 not in seen:
                        w2 = word + (k + 1,)
                        seen[m2] = w2
                        nxt.append((m2, w2))
                        if len(seen) > bound:
                            raise RuntimeError(
                                f"Weyl group larger than the configured bound {bound}")
            level = nxt
            ordered.extend(nxt)

        self.elements = [WeylElement(m, w) for m, w in ordered]
        self.by_matrix = {e.matrix: e for e in self.elements}
        self.identity = self.elements[0]
        self.longest = self.elements[-1]
        assert all(e.length < self.longest.length for e in self.elements[:-1]), \
            "longest element must be unique"

    def simple(self, i):
        """The generator s_i, 1-indexed."""
        return self.by_matrix[self.simple_matrices[i - 1]]

    def mult(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self.by_matrix[_matmul(a.matrix, b.matrix)]

    def mult_simple(self, a: WeylElement, i) -> WeylElement:
        return self.by_matrix[_matmul(a.matrix, self.simple_matrices[i - 1])]

    def inverse(self, a: WeylElement) -> WeylElement:
        m = self.identity_matrix
        for i in reversed(a.word):
            m = _matmul(m, self.simple_matrices[i - 1])
        return self.by_matrix[m]

    def root_sign(self, w: WeylElement, root):
        """Sign of w(alpha) for a positive root alpha in root coordinates."""
        f = tuple(sum(self.rs.cartan[i][j] * root[j] for j in range(self.rs.rank))
                  for i in range(self.rs.rank))
        return self.roots_fund[w.act_fund(f)][0]

    def length_by_inversions(self, w: WeylElement):
        return sum(1 for f in self.pos_roots_fund
                   if self.roots_fund[w.act_fund(f)][0] < 0)

    def reflection(self, root):
        """The reflection s_beta for a root in root coordinates."""
        n = self.rs.rank
        cov = self.rs.coroot(root)
        fund = tuple(sum(self.rs.cartan[i][j] * root[j] for j in range(n)) for i in range(n))
        mat = tuple(tuple((1 if i == j else 0) - _as_int(cov[j] * fund[i])
                          for j in range(n)) for i in range(n))
        return self.by_matrix[mat]

    def greedy_word(self, w: WeylElement):
        """Reduced word by greedy leftmost descent: repeatedly strip the
        smallest i with length(s_i w) < length(w). Agrees with the cached
        breadth-first word."""
        out = []
        m = w.matrix
        cur = self.by_matrix[m]
        while cur.word:
            lw = cur.length
            for i in range(1, self.rs.rank + 1):
                cand = self.by_matrix[_matmul(self.simple_matrices[i - 1], cur.matrix)]
                if cand.length < lw:
                    out.append(i)
                    cur = cand
                    break
        return tuple(out)


def _as_int(x):
    f = Fraction(x)
    if f.denominator != 1:
        raise AssertionError(f"expected an integer, got {f}")
    return int(f)


_GROUPS = {}


def get_weyl_group(rs: RootSystem, bound=DEFAULT_GROUP_BOUND) -> WeylGroup:
    key = (rs.type_label, rs.rank)
    if key not in _GROUPS:
        _GROUPS[key] = WeylGroup(rs, bound=bound)
    return _GROUPS[key]


def enumerate_weyl(rs: RootSystem, bound=DEFAULT_GROUP_BOUND):
    """All Weyl group elements, sorted by (length, lex word)."""
    return list(get_weyl_group(rs, bound=bound).elements)


class ParabolicContext:
    """A standard parabolic P given by the simple roots S_P it drops from the Levi.

    Carries the minimal coset representatives of W/W_P sorted by
    (length, lex word), the dimension of the flag variety, the Levi half-sum
    rho_L, the longest elements of W and W_P, an eagerly built chi table,
    and the degrees of the quantum parameters.
    """

    def __init__(self, rs: RootSystem, s_p, bound=DEFAULT_GROUP_BOUND):
        s_p = frozenset(int(i) for i in s_p)
        if not s_p:
            raise ValueError("S_P must be a nonempty set of simple-root indices "
                             "(the full group gives a point, not a flag variety)")
        if not all(1 <= i <= rs.rank for i in s_p):
            raise ValueError(f"S_P indices out of range 1..{rs.rank}: {sorted(s_p)}")
        self.rs = rs
        self.s_p = s_p
        self.delta_p = tuple(i for i in range(1, rs.rank + 1) if i not in s_p)
        self.group = get_weyl_group(rs, bound=bound)

        # Levi positive roots: support inside Delta_P
        self.levi_pos = tuple(r for r in rs.positive_roots
                              if all(r[i - 1] == 0 for i in s_p))
        levi_set = set(self.levi_pos)
        self.outside_pos = tuple(r for r in rs.positive_roots if r not in levi_set)
        self.dim = len(self.outside_pos)

        half = [Fraction(0)] * rs.rank
        for r in self.levi_pos:
            for j, c in enumerate(r):
                half[j] += Fraction(c, 2)
        self.rho_l = rs.weight_from_root_coords(half)

        # minimal representatives: w(alpha) positive for all alpha in Delta_P
        self.wp = [w for w in self.group.elements
                   if all(self.group.root_sign(w, _unit(rs.rank, i - 1)) > 0
                          for i in self.delta_p)]
        wp_count = len(self.group.elements) // self._levi_order()
        assert len(self.wp) == wp_count, "coset representative count mismatch"
        self.wp_index = {w: k for k, w in enumerate(self.wp)}

        self.w_o = self.group.longest
        self.w_o_p = self._levi_longest()

        self._chi = {}
        for w in self.wp:
            self._chi[w] = self._chi_both_ways(w)

        self.q_degrees = {}
        chi_e = self._chi[self.group.identity]
        for i in sorted(s_p):
            via_rho = 2 - 2 * self.rho_l.coords[i - 1]
            via_chi = chi_e.coords[i - 1]
            assert via_rho == via_chi, (i, via_rho, via_chi)
            deg = _as_int(via_rho)
            assert deg > 0
            self.q_degrees[i] = deg

    def _levi_order(self):
        if not self.delta_p:
            return 1
        mats = {self.group.identity_matrix}
        frontier = [self.group.identity_matrix]
        while frontier:
            nxt = []
            for m in frontier:
                for i in self.delta_p:
                    m2 = _matmul(m, self.group.simple_matrices[i - 1])
                    if m2 not in mats:
                        mats.add(m2)
                        nxt.append(m2)
            frontier = nxt
        self._levi_mats = mats
        return len(mats)

    def _levi_longest(self):
        if not self.delta_p:
            return self.group.identity
        best = max((self.group.by_matrix[m] for m in self._levi_mats),
                   key=lambda e: e.length)
        return best

    def _chi_both_ways(self, w):
        rs, g = self.rs, self.group
        acc = [Fraction(0)] * rs.rank
        for r in self.outside_pos:
            if g.root_sign(w, r) > 0:
                for j, c in enumerate(r):
                    acc[j] += c
        via_sum = rs.weight_from_root_coords(acc)
        winv = g.inverse(w)
        via_rho = rs.rho - 2 * self.rho_l + winv.act(rs.rho)
        assert via_sum == via_rho, f"chi formulas disagree at {w}"
        return via_sum

    # --- queries -----------------------------------------------------------

    def codim(self, w):
        return self.dim - w.length

    def chi(self, w) -> Weight:
        if w not in self._chi:
            raise ValueError(f"{w} is not a minimal coset representative here")
        return self._chi[w]

    def chi_e(self) -> Weight:
        return self._chi[self.group.identity]

    def dual(self, w) -> WeylElement:
        """The involution w -> w_o w w_o^P of the representative set; swaps
        length and codimension."""
        out = self.group.mult(self.group.mult(self.w_o, w), self.w_o_p)
        assert out in self.wp_index, "duality left the representative set"
        return out

    def min_rep(self, v) -> WeylElement:
        """Minimal representative of the coset v W_P (strip right descents in Delta_P)."""
        g = self.group
        cur = v
        moved = True
        while moved:
            moved = False
            for i in self.delta_p:
                if g.root_sign(cur, _unit(self.rs.rank, i - 1)) < 0:
                    cur = g.mult_simple(cur, i)
                    moved = True
                    break
        return cur

    def by_length(self, ell):
        return [w for w in self.wp if w.length == ell]

    def point_action(self, w, pt: CartanPoint) -> CartanPoint:
        """w acting on the Cartan subalgebra: alpha_j(w.mu) = (w^{-1} alpha_j)(mu)."""
        rs = self.rs
        winv = self.group.inverse(w)
        out = []
        for j in range(rs.rank):
            alpha = rs.simple_root(j + 1)
            moved = winv.act(alpha)
            out.append(rs.weight_value(moved, pt))
        return CartanPoint(tuple(out))


def _unit(n, k):
    return tuple(int(j == k) for j in range(n))


_CONTEXTS = {}


def minimal_reps(rs: RootSystem, s_p, bound=DEFAULT_GROUP_BOUND) -> ParabolicContext:
    key = (rs.type_label, rs.rank, frozenset(int(i) for i in s_p))
    if key not in _CONTEXTS:
        _CONTEXTS[key] = ParabolicContext(rs, s_p, bound=bound)
    return _CONTEXTS[key]


def chi(ctx: ParabolicContext, w: WeylElement) -> Weight:
    return ctx.chi(w)


def s_matrix(ctx: ParabolicContext):
    """The integer matrix sum_{alpha outside the Levi} alpha(x_i) alpha(alpha_j^vee)
    over i, j in S_P. Diagonal entries equal 2 g* / <alpha_i, alpha_i>; the
    identity is asserted as a cross-check."""
    rs = ctx.rs
    idx = sorted(ctx.s_p)
    out = []
    for i in idx:
        row = []
        for j in idx:
            tot = Fraction(0)
            for r in ctx.outside_pos:
                tot += Fraction(r[i - 1]) * rs.root_pairing(r, j)
            val = _as_int(tot)
            assert val >= 0, (i, j, val)
            norm_i = rs.form_on_root_coords(_unit(rs.rank, i - 1), _unit(rs.rank, i - 1))
            expect = Fraction(2 * rs.dual_coxeter) / norm_i if i == j else Fraction(0)
            assert Fraction(val) == expect, (i, j, val, expect)
            row.append(val)
        out.append(tuple(row))
    return tuple(out)
