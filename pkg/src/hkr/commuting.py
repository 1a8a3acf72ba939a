"""Commuting tuples of p-power-order elements and the class counts they predict.

For a finite group G, a prime p, and n >= 0, the basic object is the set of
n-tuples of pairwise commuting elements whose orders are powers of p.  The
group acts by simultaneous conjugation; the number of orbits is the rank
prediction attached to (G, p, n).  The same number is computed along several
independent routes (explicit orbits, centralizer recursion, and for symmetric
groups a purely combinatorial count), which the test suite plays against each
other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iter_product

from .errors import CapExceeded
from .groupcore import (
    ConjugacyClass,
    FiniteGroup,
    Permutation,
    centralizer,
    conjugacy_classes,
)

__all__ = [
    "CommutingTuple",
    "TupleClass",
    "GLMatrix",
    "is_p_power_order",
    "p_power_elements",
    "hom_tuples",
    "commuting_tuples_all",
    "tuple_classes",
    "rank_prediction",
    "gl_matrices",
    "apply_matrix",
    "gl_action_orbits",
    "zpn_set_count",
    "subgroup_count",
    "hnf_open_subgroup_count",
    "DEFAULT_WORK_CAP",
]

DEFAULT_WORK_CAP = 100_000_000
DEFAULT_SUBGROUP_CAP = 1_000_000
DEFAULT_GL_CAP = 1_000_000


def is_p_power_order(g: Permutation, p: int) -> bool:
    """True if the order of g is a power of p (every cycle length is one)."""
    img = g.images
    seen = [False] * len(img)
    for start in range(len(img)):
        if seen[start]:
            continue
        seen[start] = True
        ln = 1
        j = img[start]
        while j != start:
            seen[j] = True
            ln += 1
            j = img[j]
        while ln % p == 0:
            ln //= p
        if ln != 1:
            return False
    return True


def p_power_elements(G: FiniteGroup, p: int) -> list[Permutation]:
    """Elements of p-power order, in the canonical element order."""
    key = ("ppow", p)
    got = G._cache.get(key)
    if got is None:
        order = G.order
        while order % p == 0:
            order //= p
        if order == 1:
            # Lagrange: in a p-group every element order is a p-power.
            got = list(G.elements)
        else:
            got = [g for g in G.elements if is_p_power_order(g, p)]
        G._cache[key] = got
    return got


class CommutingTuple:
    """An n-tuple of pairwise commuting p-power-order elements of a group."""

    __slots__ = ("entries", "group", "p")

    def __init__(self, entries, group: FiniteGroup, p: int):
        entries = tuple(entries)
        for g in entries:
            if g not in group:
                raise ValueError(f"{g!r} is not in the group")
            if not is_p_power_order(g, p):
                raise ValueError(f"{g!r} does not have {p}-power order")
        for i, a in enumerate(entries):
            for b in entries[i + 1 :]:
                if a * b != b * a:
                    raise ValueError(f"entries {a!r} and {b!r} do not commute")
        self.entries = entries
        self.group = group
        self.p = p

    @classmethod
    def _raw(cls, entries, group, p) -> CommutingTuple:
        t = object.__new__(cls)
        t.entries = entries
        t.group = group
        t.p = p
        return t

    def sort_key(self) -> tuple:
        return tuple(g.images for g in self.entries)

    def conjugate_by(self, g: Permutation) -> CommutingTuple:
        return CommutingTuple._raw(
            tuple(e.conjugate_by(g) for e in self.entries), self.group, self.p
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, CommutingTuple) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        inner = ", ".join(e.cycle_string() for e in self.entries)
        return f"CommutingTuple({inner})"


@dataclass(frozen=True)
class TupleClass:
    """A simultaneous-conjugation class of commuting tuples."""

    representative: CommutingTuple
    size: int
    image_centralizer_order: int


def _extend_tuples(prefix, candidates, n, out, budget):
    if len(prefix) == n:
        out.append(prefix)
        return
    last = len(prefix) + 1 == n
    for g in candidates:
        budget[0] -= len(candidates)
        if budget[0] < 0:
            raise CapExceeded(f"tuple enumeration exceeds work cap {budget[1]}")
        if last:
            # the final entry needs no further narrowing
            out.append(prefix + (g,))
        else:
            narrowed = [h for h in candidates if h * g == g * h]
            _extend_tuples(prefix + (g,), narrowed, n, out, budget)


def hom_tuples(G: FiniteGroup, p: int, n: int, *, work_cap=DEFAULT_WORK_CAP) -> list[CommutingTuple]:
    """All commuting n-tuples of p-power-order elements, lexicographically ordered.

    Tuples are grown one entry at a time; the candidate pool for the next entry
    is the p-power part of the centralizer of the prefix, so the work stays
    proportional to the answer for groups whose p-elements are sparse.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return [CommutingTuple._raw((), G, p)]
    pool = p_power_elements(G, p)
    out: list[tuple] = []
    budget = [work_cap, work_cap]
    _extend_tuples((), pool, n, out, budget)
    return [CommutingTuple._raw(t, G, p) for t in out]


def commuting_tuples_all(G: FiniteGroup, n: int, *, work_cap=DEFAULT_WORK_CAP) -> list[tuple]:
    """All commuting n-tuples with no order restriction (entries as Permutations)."""
    if n == 0:
        return [()]
    out: list[tuple] = []
    budget = [work_cap, work_cap]
    _extend_tuples((), list(G.elements), n, out, budget)
    return out


def _orbit_partition(G: FiniteGroup, tuples):
    """Partition tuples (given as entry tuples) into simultaneous-conjugation orbits.

    Returns (orbits, index) where orbits is a list of sorted member lists and
    index maps each entry tuple to its orbit position in the returned list.
    """
    gens = G.generators
    location: dict[tuple, int] = {}
    orbits: list[list[tuple]] = []
    for t in tuples:
        key = tuple(e.images for e in t)
        if key in location:
            continue
        orbit = {key: t}
        frontier = [t]
        while frontier:
            next_frontier = []
            for cur in frontier:
                for s in gens:
                    moved = tuple(e.conjugate_by(s) for e in cur)
                    mkey = tuple(e.images for e in moved)
                    if mkey not in orbit:
                        orbit[mkey] = moved
                        next_frontier.append(moved)
            frontier = next_frontier
        idx = len(orbits)
        orbits.append([orbit[k] for k in sorted(orbit)])
        for k in orbit:
            location[k] = idx
    return orbits, location


def tuple_classes(G: FiniteGroup, p: int, n: int, *, work_cap=DEFAULT_WORK_CAP) -> list[TupleClass]:
    """Conjugation classes of commuting tuples, canonically ordered.

    Classes are ordered by (size, least member); the representative is the
    least member.  image_centralizer_order is counted directly as the number
    of group elements commuting with every entry of the representative, which
    by orbit-stabilizer must multiply with the class size to the group order
    (the stabilizer of a tuple is exactly the centralizer of its image).
    """
    tuples = hom_tuples(G, p, n, work_cap=work_cap)
    if G.is_abelian():
        return [
            TupleClass(t, 1, G.order) for t in sorted(tuples, key=CommutingTuple.sort_key)
        ]
    orbits, _ = _orbit_partition(G, [t.entries for t in tuples])
    classes = []
    for members in orbits:
        rep = members[0]
        cent = sum(1 for g in G.elements if all(g * e == e * g for e in rep))
        classes.append(
            TupleClass(CommutingTuple._raw(rep, G, p), len(members), cent)
        )
    classes.sort(key=lambda c: (c.size, c.representative.sort_key()))
    return classes


def _p_power_classes(G: FiniteGroup, p: int) -> list[ConjugacyClass]:
    return [c for c in conjugacy_classes(G) if is_p_power_order(c.representative, p)]


def rank_prediction(G: FiniteGroup, p: int, n: int) -> int:
    """Number of conjugation classes of commuting p-power n-tuples.

    Computed by peeling one entry at a time: classes of n-tuples correspond to
    pairs (conjugacy class of a p-power element g, class of an (n-1)-tuple in
    the centralizer of g).  This agrees with len(tuple_classes(G, p, n)) but
    stays cheap when the tuple set itself would be large.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1
    if G.is_abelian():
        return len(p_power_elements(G, p)) ** n
    if n == 1:
        return len(_p_power_classes(G, p))
    total = 0
    for cls in _p_power_classes(G, p):
        total += rank_prediction(centralizer(G, [cls.representative]), p, n - 1)
    return total


class GLMatrix:
    """An invertible n x n matrix over Z/p^k, acting on exponent columns."""

    __slots__ = ("p", "k", "n", "rows")

    def __init__(self, p: int, k: int, n: int, rows):
        self.p = p
        self.k = k
        self.n = n
        self.rows = tuple(tuple(x % p**k for x in r) for r in rows)
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError(f"expected a {n} x {n} matrix")
        if not self._invertible():
            raise ValueError("matrix is not invertible modulo p")

    def _invertible(self) -> bool:
        # Row-reduce a copy over the field with p elements.
        m = [[x % self.p for x in r] for r in self.rows]
        rank = 0
        for col in range(self.n):
            piv = next((r for r in range(rank, self.n) if m[r][col] % self.p), None)
            if piv is None:
                return False
            m[rank], m[piv] = m[piv], m[rank]
            inv = pow(m[rank][col], -1, self.p)
            m[rank] = [(inv * x) % self.p for x in m[rank]]
            for r in range(self.n):
                if r != rank and m[r][col]:
                    f = m[r][col]
                    m[r] = [(x - f * y) % self.p for x, y in zip(m[r], m[rank])]
            rank += 1
        return True

    def __mul__(self, other: GLMatrix) -> GLMatrix:
        mod = self.p**self.k
        rows = [
            [
                sum(self.rows[i][j] * other.rows[j][l] for j in range(self.n)) % mod
                for l in range(self.n)
            ]
            for i in range(self.n)
        ]
        return GLMatrix(self.p, self.k, self.n, rows)

    def transpose(self) -> GLMatrix:
        return GLMatrix(self.p, self.k, self.n, list(zip(*self.rows)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GLMatrix)
            and (self.p, self.k, self.n, self.rows) == (other.p, other.k, other.n, other.rows)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.n, self.rows))

    def __repr__(self) -> str:
        return f"GLMatrix(p={self.p}, k={self.k}, rows={self.rows})"


def gl_matrices(p: int, n: int, k: int, *, cap=DEFAULT_GL_CAP) -> list[GLMatrix]:
    """All of GL_n(Z/p^k), ordered lexicographically by flattened entries."""
    mod = p**k
    if mod ** (n * n) > cap:
        raise CapExceeded(f"GL enumeration size {mod ** (n * n)} exceeds cap {cap}")
    out = []
    for flat in iter_product(range(mod), repeat=n * n):
        rows = [flat[i * n : (i + 1) * n] for i in range(n)]
        try:
            out.append(GLMatrix(p, k, n, rows))
        except ValueError:
            continue
    return out


def apply_matrix(t: CommutingTuple, sigma: GLMatrix) -> CommutingTuple:
    """Precompose a tuple with a matrix: entry i of the result is
    prod_j g_j ** sigma[j][i] (the column convention)."""
    if len(t.entries) != sigma.n:
        raise ValueError("matrix size does not match tuple length")
    ident = t.group.identity
    entries = []
    for i in range(sigma.n):
        acc = ident
        for j, g in enumerate(t.entries):
            e = sigma.rows[j][i]
            if e:
                acc = acc * g**e
        entries.append(acc)
    return CommutingTuple._raw(tuple(entries), t.group, t.p)


def gl_action_orbits(G: FiniteGroup, p: int, n: int, k: int, *, work_cap=DEFAULT_WORK_CAP, gl_cap=DEFAULT_GL_CAP) -> list[list[TupleClass]]:
    """Orbits of GL_n(Z/p^k) on the conjugation classes of commuting tuples.

    Requires p^k to annihilate every tuple entry (the exponents live in Z/p^k).
    Orbits are lists of TupleClass values; both layers are canonically ordered.
    """
    mod = p**k
    pool = p_power_elements(G, p)
    worst = max((g.order() for g in pool), default=1)
    if mod % worst != 0:
        raise ValueError(
            f"p^k = {mod} does not annihilate all p-power elements (max order {worst})"
        )
    tuples = hom_tuples(G, p, n, work_cap=work_cap)
    if G.is_abelian():
        ordered = sorted(tuples, key=CommutingTuple.sort_key)
        classes = [TupleClass(t, 1, G.order) for t in ordered]
        member_class = {t.entries: i for i, t in enumerate(ordered)}
    else:
        orbits, location = _orbit_partition(G, [t.entries for t in tuples])
        classes = []
        order_of_orbit = []
        for members in orbits:
            rep = members[0]
            cent = sum(1 for g in G.elements if all(g * e == e * g for e in rep))
            classes.append(TupleClass(CommutingTuple._raw(rep, G, p), len(members), cent))
            order_of_orbit.append(members)
        perm = sorted(range(len(classes)), key=lambda i: (classes[i].size, classes[i].representative.sort_key()))
        classes = [classes[i] for i in perm]
        member_class = {}
        for new_idx, old_idx in enumerate(perm):
            for m in order_of_orbit[old_idx]:
                member_class[m] = new_idx
    mats = gl_matrices(p, n, k, cap=gl_cap)
    seen = set()
    orbit_lists = []
    for idx in range(len(classes)):
        if idx in seen:
            continue
        hit = set()
        for sigma in mats:
            moved = apply_matrix(classes[idx].representative, sigma)
            hit.add(member_class[moved.entries])
        if idx not in hit:
            raise ValueError("identity matrix did not fix a class; inconsistent state")
        seen |= hit
        orbit_lists.append(sorted(hit))
    orbit_lists.sort(key=lambda o: o[0])
    return [[classes[i] for i in orbit] for orbit in orbit_lists]


def subgroup_count(p: int, n: int, k: int, *, cap=DEFAULT_SUBGROUP_CAP) -> int:
    """Number of subgroups of order p^k in (Z/p^k)^n, by exhaustive enumeration.

    Subgroups are grown one index-p layer at a time: every subgroup of order
    p^(j+1) arises from one of order p^j by adjoining an element x with
    p*x inside it.  Applies only while p^(k*n) stays under the cap.
    """
    if k < 0 or n < 0:
        raise ValueError("n and k must be >= 0")
    if k == 0 or n == 0:
        return 1 if k == 0 else 0
    mod = p**k
    if mod**n > cap:
        raise CapExceeded(f"ambient group size {mod ** n} exceeds cap {cap}")
    ambient = list(iter_product(range(mod), repeat=n))
    zero = (0,) * n
    level = {frozenset([zero])}
    for _ in range(k):
        nxt = set()
        for H in level:
            for x in ambient:
                if x in H:
                    continue
                px = tuple((p * c) % mod for c in x)
                if px not in H:
                    continue
                members = set(H)
                step = x
                for _ in range(p - 1):
                    members.update(tuple((a + b) % mod for a, b in zip(h, step)) for h in H)
                    step = tuple((a + b) % mod for a, b in zip(step, x))
                nxt.add(frozenset(members))
        level = nxt
    return len(level)


def hnf_open_subgroup_count(p: int, n: int, k: int) -> int:
    """Independent count of the same subgroups via Hermite normal form.

    Index-p^k open subgroups of the n-fold product of the p-adic integers
    correspond to upper-triangular Hermite forms with p-power diagonal
    (d_1, ..., d_n), prod d_i = p^k, and entries above the diagonal in row i
    taken mod d_i; the number of forms with a fixed diagonal is
    prod_i d_i^(i-1).
    """
    total = 0

    def walk(i, remaining, weight):
        nonlocal total
        if i == n - 1:
            total += weight * (p**remaining) ** (n - 1)
            return
        for a in range(remaining + 1):
            walk(i + 1, remaining - a, weight * (p**a) ** i)

    if n == 0:
        return 1 if k == 0 else 0
    walk(0, k, 1)
    return total


def zpn_set_count(p: int, n: int, k: int, *, cap=DEFAULT_SUBGROUP_CAP) -> int:
    """Number of isomorphism classes of p^k-element sets with an action of the
    n-fold product of the p-adic integers.

    Such a set is a multiset of transitive pieces of sizes p^d; transitive
    pieces of size p^d are counted by subgroup_count(p, n, d).  A multiset
    generating-function pass over the piece sizes does the rest.
    """
    size = p**k
    ways = [0] * (size + 1)
    ways[0] = 1
    for d in range(k + 1):
        part = p**d
        types = subgroup_count(p, n, d, cap=cap)
        nxt = [0] * (size + 1)
        for used in range(size // part + 1):
            cnt = math.comb(types + used - 1, used)
            base = used * part
            for s in range(size - base + 1):
                if ways[s]:
                    nxt[s + base] += cnt * ways[s]
        ways = nxt
    return ways[size]
