"""Fixed-point constructions for finite G-sets.

The central object is fix_n(X, p, n): the G-set of pairs (alpha, x) where
alpha is a commuting n-tuple of p-power-order elements and x is a point fixed
by every entry, with the intertwined action g.(alpha, x) = (g alpha g^-1, g.x).
Around it: orbit/stabilizer censuses with the rank-prediction consistency
contract, the iterated-fix bijection Fix_1(Fix_{n-1}(X)) = Fix_n(X), the
GL_n(Z/p^k) action by precomposition, the evaluation homomorphism check, and
the free-loop count identity for p-groups.

Every GSet verifies its own action laws on construction, so each derived
G-set (fixed points, unions, products) re-proves equivariance of the
construction that produced it.
"""

from __future__ import annotations

import itertools
from collections import namedtuple
from dataclasses import dataclass

from .commuting import (
    CommutingTuple,
    GLMatrix,
    apply_matrix,
    commuting_tuples_all,
    hom_tuples,
    rank_prediction,
    tuple_classes,
)
from .errors import CapExceeded, HkrError
from .groupcore import FiniteGroup, Permutation, make_group, named_group

__all__ = [
    "GSet",
    "FixPoint",
    "OrbitCensus",
    "fix_n",
    "orbit_census",
    "iterate_fix_check",
    "IterateFixResult",
    "gl_on_fix",
    "evaluation_hom_check",
    "loops_pgroup_check",
    "LoopsCheck",
    "trivial_gset",
    "regular_gset",
    "coset_gset",
    "disjoint_union",
    "product_gset",
    "gset_from_json",
    "EVAL_CHECK_WORK_CAP",
]

EVAL_CHECK_WORK_CAP = 1_000_000


class GSet:
    """A finite left G-set with the action table built and verified.

    The constructor receives the images of every point under every group
    generator; the full action is grown along the Cayley graph and then the
    identity and compatibility laws are checked for all elements, generators,
    and points, so an inconsistent action cannot produce a GSet.
    """

    __slots__ = ("group", "points", "index", "maps", "name")

    def __init__(self, group: FiniteGroup, points, gen_images, *, name: str = ""):
        self.group = group
        self.points = tuple(points)
        self.name = name
        self.index = {x: i for i, x in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise ValueError("point labels must be distinct")
        gens = list(group.generators)
        if len(gen_images) != len(gens):
            raise ValueError("one image list per group generator expected")
        gen_maps = []
        for imgs in gen_images:
            row = tuple(self.index[x] for x in imgs)
            if len(row) != len(self.points) or len(set(row)) != len(row):
                raise ValueError("generator image is not a permutation of the points")
            gen_maps.append(row)

        n = len(self.points)
        ident = tuple(range(n))
        maps = {group.identity: ident}
        frontier = [group.identity]
        while frontier:
            nxt = []
            for g in frontier:
                base = maps[g]
                for s, smap in zip(gens, gen_maps):
                    h = g * s
                    if h not in maps:
                        # left action: (g s).x = g.(s.x)
                        maps[h] = tuple(base[smap[x]] for x in range(n))
                        nxt.append(h)
            frontier = nxt
        if len(maps) != group.order:
            raise HkrError("action table does not cover the group")
        for g in group.elements:
            base = maps[g]
            for s, smap in zip(gens, gen_maps):
                if maps[g * s] != tuple(base[smap[x]] for x in range(n)):
                    raise HkrError("action is not compatible with multiplication")
        self.maps = maps

    @property
    def size(self) -> int:
        return len(self.points)

    def act(self, g: Permutation, x):
        return self.points[self.maps[g][self.index[x]]]

    def orbit_indices(self) -> list[list[int]]:
        """Orbits as sorted index lists, ordered by least member."""
        gen_maps = [self.maps[s] for s in self.group.generators]
        seen = [False] * len(self.points)
        orbits = []
        for start in range(len(self.points)):
            if seen[start]:
                continue
            seen[start] = True
            orbit = [start]
            head = 0
            while head < len(orbit):
                x = orbit[head]
                head += 1
                for gm in gen_maps:
                    y = gm[x]
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
            orbits.append(sorted(orbit))
        return orbits

    def orbits(self) -> list[list]:
        return [[self.points[i] for i in orb] for orb in self.orbit_indices()]

    def stabilizer_order(self, x) -> int:
        i = self.index[x]
        return sum(1 for mp in self.maps.values() if mp[i] == i)

    def stabilizer(self, x) -> FiniteGroup:
        i = self.index[x]
        elems = [g for g, mp in self.maps.items() if mp[i] == i]
        return make_group(self.group.degree, elems, name=None)

    def to_json(self) -> dict:
        gens = list(self.group.generators)
        return {
            "group": self.group.name or f"degree-{self.group.degree}",
            "points": [str(x) for x in self.points],
            "action": {
                s.cycle_string(): [str(self.points[self.maps[s][i]]) for i in range(self.size)]
                for s in gens
            },
        }

    def __repr__(self):
        label = self.name or f"{self.size} points"
        return f"GSet[{label}]"


@dataclass(frozen=True)
class FixPoint:
    """A commuting tuple together with a point fixed by all of its entries."""

    alpha: CommutingTuple
    point: object

    def __repr__(self):
        inner = ", ".join(e.cycle_string() for e in self.alpha.entries)
        return f"FixPoint[({inner}); {self.point!r}]"


def trivial_gset(G: FiniteGroup) -> GSet:
    pt = "pt"
    return GSet(G, (pt,), [[pt] for _ in G.generators], name="point")


def regular_gset(G: FiniteGroup) -> GSet:
    """G acting on itself by left translation; labels are the elements."""
    pts = list(G.elements)
    return GSet(G, pts, [[s * x for x in pts] for s in G.generators], name="regular")


def coset_gset(G: FiniteGroup, H: FiniteGroup, *, name: str = "") -> GSet:
    """Left cosets gH with the translation action.

    Cosets are labeled by the cycle string of their least element, which
    keeps point labels deterministic and JSON-friendly.
    """
    for h in H.elements:
        if h not in G:
            raise ValueError("H is not a subgroup of G")
    members = {}
    for g in G.elements:
        key = min(g * h for h in H.elements)
        members.setdefault(key, frozenset(g * h for h in H.elements))
    keys = sorted(members)
    label_of = {key: key.cycle_string() + "H" for key in keys}
    images = []
    for s in G.generators:
        images.append([label_of[min(s * x for x in members[key])] for key in keys])
    return GSet(G, [label_of[key] for key in keys], images, name=name or "cosets")


def disjoint_union(X: GSet, Y: GSet) -> GSet:
    if X.group is not Y.group and X.group.elements != Y.group.elements:
        raise ValueError("both G-sets must share the same group")
    pts = [(0, x) for x in X.points] + [(1, y) for y in Y.points]
    images = []
    for s in X.group.generators:
        mx, my = X.maps[s], Y.maps[s]
        images.append(
            [(0, X.points[mx[i]]) for i in range(X.size)]
            + [(1, Y.points[my[i]]) for i in range(Y.size)]
        )
    return GSet(X.group, pts, images, name=f"{X.name or 'X'}+{Y.name or 'Y'}")


def product_gset(X: GSet, Y: GSet) -> GSet:
    if X.group is not Y.group and X.group.elements != Y.group.elements:
        raise ValueError("both G-sets must share the same group")
    pts = [(x, y) for x in X.points for y in Y.points]
    images = []
    for s in X.group.generators:
        mx, my = X.maps[s], Y.maps[s]
        images.append(
            [
                (X.points[mx[i]], Y.points[my[j]])
                for i in range(X.size)
                for j in range(Y.size)
            ]
        )
    return GSet(X.group, pts, images, name=f"{X.name or 'X'}x{Y.name or 'Y'}")


def gset_from_json(doc: dict) -> GSet:
    """Build a GSet from {group, points, action}.

    The action is an object keyed by generator cycle strings (as printed by
    the group mini-language parser), each value listing the image of every
    point in order; a plain list aligned with the generator list is also
    accepted.
    """
    G = named_group(doc["group"])
    points = list(doc["points"])
    action = doc["action"]
    gens = list(G.generators)
    if isinstance(action, dict):
        try:
            gen_images = [action[s.cycle_string()] for s in gens]
        except KeyError as missing:
            raise ValueError(f"action missing generator {missing}") from None
    else:
        gen_images = list(action)
    return GSet(G, points, gen_images, name=doc.get("name", ""))


# ---------------------------------------------------------------------------
# Fix_n

_fix_cache: dict = {}


def fix_n(X: GSet, p: int, n: int, *, work_cap=None) -> GSet:
    """The G-set of pairs (alpha, x): alpha a commuting n-tuple of p-power
    order, x a point of X fixed by every entry of alpha.

    Points are ordered by (alpha, point index); the action is
    g.(alpha, x) = (g alpha g^-1, g.x), re-verified by the GSet constructor.
    Results are memoized per GSet instance.
    """
    cache_key = (X, p, n, work_cap)
    got = _fix_cache.get(cache_key)
    if got is not None:
        return got
    G = X.group
    kwargs = {} if work_cap is None else {"work_cap": work_cap}
    tuples = hom_tuples(G, p, n, **kwargs)
    pts = []
    for t in tuples:
        entry_maps = [X.maps[e] for e in t.entries]
        for i in range(X.size):
            if all(mp[i] == i for mp in entry_maps):
                pts.append(FixPoint(t, X.points[i]))
    images = []
    for s in G.generators:
        smap = X.maps[s]
        row = []
        for fp in pts:
            row.append(
                FixPoint(fp.alpha.conjugate_by(s), X.points[smap[X.index[fp.point]]])
            )
        images.append(row)
    label = X.name or "X"
    F = GSet(G, pts, images, name=f"Fix_{n}({label}; p={p})")
    _fix_cache[cache_key] = F
    return F


@dataclass(frozen=True)
class OrbitCensus:
    """Orbit census of fix_n(X, p, n) with the consistency contract evaluated.

    predicted is the sum of rank_prediction(H, p, n) over the orbits G/H of
    the underlying G-set X; consistent records whether the orbit count
    matches it.
    """

    orbits: tuple
    total_points: int
    predicted: int
    consistent: bool

    @property
    def count(self) -> int:
        return len(self.orbits)

    def to_json(self) -> dict:
        return {
            "orbits": [
                {
                    "size": size,
                    "stabilizer_order": stab,
                    "alpha_rep": list(alpha_rep),
                }
                for size, stab, alpha_rep in self.orbits
            ],
            "total_points": self.total_points,
            "predicted": self.predicted,
            "consistent": self.consistent,
        }


def orbit_census(X: GSet, p: int, n: int, *, work_cap=None) -> OrbitCensus:
    """Census of G-orbits on fix_n(X, p, n).

    Each orbit contributes (size, stabilizer order of the least
    representative, alpha of that representative as cycle strings); the
    orbit-stabilizer product is asserted per orbit, and the census is
    compared with the subgroup rank-prediction sum over the orbits of X.
    """
    F = fix_n(X, p, n, work_cap=work_cap)
    G = X.group
    records = []
    for orb in F.orbit_indices():
        rep = F.points[orb[0]]
        stab = F.stabilizer_order(rep)
        if stab * len(orb) != G.order:
            raise HkrError("orbit-stabilizer product is off")
        alpha_rep = tuple(e.cycle_string() for e in rep.alpha.entries)
        records.append((len(orb), stab, alpha_rep))
    predicted = 0
    for orb in X.orbit_indices():
        H = X.stabilizer(X.points[orb[0]])
        predicted += rank_prediction(H, p, n)
    return OrbitCensus(
        orbits=tuple(records),
        total_points=F.size,
        predicted=predicted,
        consistent=len(records) == predicted,
    )


IterateFixResult = namedtuple("IterateFixResult", ["ok", "forward"])


def iterate_fix_check(X: GSet, p: int, n: int, *, work_cap=None) -> IterateFixResult:
    """Verify Fix_1(Fix_{n-1}(X)) = Fix_n(X) via the regrouping bijection
    ((a_n), ((a_1..a_{n-1}), x)) -> ((a_1..a_n), x), including equivariance.
    """
    if n < 2:
        raise ValueError("iterated fix needs n >= 2")
    G = X.group
    inner = fix_n(X, p, n - 1, work_cap=work_cap)
    outer = fix_n(inner, p, 1, work_cap=work_cap)
    direct = fix_n(X, p, n, work_cap=work_cap)

    forward = {}
    for q in outer.points:
        (a_n,) = q.alpha.entries
        beta = q.point.alpha
        merged = CommutingTuple(beta.entries + (a_n,), G, p)
        forward[q] = FixPoint(merged, q.point.point)

    ok = set(forward.values()) == set(direct.points) and len(
        set(forward.values())
    ) == len(forward)
    if ok:
        for s in G.generators:
            omap, dmap = outer.maps[s], direct.maps[s]
            for q in outer.points:
                moved = outer.points[omap[outer.index[q]]]
                if forward[moved] != direct.points[dmap[direct.index[forward[q]]]]:
                    ok = False
                    break
            if not ok:
                break
    return IterateFixResult(ok, forward)


def gl_on_fix(X: GSet, p: int, n: int, k: int, sigma: GLMatrix) -> dict:
    """The automorphism (alpha, x) -> (alpha composed with sigma, x) of
    fix_n(X, p, n), as a point mapping.

    Precomposition alone composes contravariantly, so sigma acts through its
    transpose; that choice makes gl_on_fix(sigma) o gl_on_fix(tau) equal
    gl_on_fix(sigma * tau).  Requires p^k to annihilate every tuple entry.
    """
    if (sigma.p, sigma.n) != (p, n) or sigma.k != k:
        raise ValueError("matrix shape does not match (p, n, k)")
    F = fix_n(X, p, n)
    mod = p**k
    for fp in F.points:
        for e in fp.alpha.entries:
            if mod % e.order():
                raise HkrError(f"k too small: entry of order {e.order()} at level p^{k}")
    tr = sigma.transpose()
    mapping = {fp: FixPoint(apply_matrix(fp.alpha, tr), fp.point) for fp in F.points}
    if set(mapping.values()) != set(F.points):
        raise HkrError("matrix action is not a bijection on fixed points")
    for s in X.group.generators:
        fmap = F.maps[s]
        for fp in F.points:
            moved = F.points[fmap[F.index[fp]]]
            if mapping[moved] != FixPoint(
                mapping[fp].alpha.conjugate_by(s), X.act(s, mapping[fp].point)
            ):
                raise HkrError("matrix action does not commute with the group action")
    return mapping


def evaluation_hom_check(G: FiniteGroup, p: int, alpha: CommutingTuple, k: int) -> bool:
    """Exhaustively verify that (l, c) -> alpha(l) * c is a homomorphism
    (Z/p^k)^n x C(im alpha) -> G.

    alpha(l) = prod_i entry_i ** l_i; the check runs over all pairs of domain
    elements, so the domain size squared must stay under the work cap.
    """
    n = len(alpha.entries)
    mod = p**k
    for e in alpha.entries:
        if mod % e.order():
            raise HkrError(f"k too small: entry of order {e.order()} at level p^{k}")
    cent = [g for g in G.elements if all(g * e == e * g for e in alpha.entries)]
    dom = mod**n * len(cent)
    if dom * dom > EVAL_CHECK_WORK_CAP:
        raise CapExceeded(f"evaluation check domain {dom}^2 exceeds cap")

    def alpha_of(l):
        acc = G.identity
        for e, li in zip(alpha.entries, l):
            if li:
                acc = acc * e**li
        return acc

    domain = [
        (l, c) for l in itertools.product(range(mod), repeat=n) for c in cent
    ]
    value = {(l, c): alpha_of(l) * c for l, c in domain}
    for l1, c1 in domain:
        base = value[(l1, c1)]
        for l2, c2 in domain:
            summed = tuple((a + b) % mod for a, b in zip(l1, l2))
            if value[(summed, c1 * c2)] != base * value[(l2, c2)]:
                return False
    return True


LoopsCheck = namedtuple(
    "LoopsCheck", ["ok", "hom_count", "all_count", "hom_classes", "all_classes"]
)


def _tuple_orbit_count(G: FiniteGroup, tuples) -> int:
    gens = list(G.generators)
    seen = set()
    count = 0
    for t in tuples:
        key = tuple(e.images for e in t)
        if key in seen:
            continue
        count += 1
        frontier = [t]
        seen.add(key)
        while frontier:
            cur = frontier.pop()
            for s in gens:
                moved = tuple(e.conjugate_by(s) for e in cur)
                mk = tuple(e.images for e in moved)
                if mk not in seen:
                    seen.add(mk)
                    frontier.append(moved)
    return count


def loops_pgroup_check(G: FiniteGroup, n: int, *, work_cap=None) -> LoopsCheck:
    """For a p-group, commuting n-tuples with no order restriction biject
    with p-power-order ones; counts and conjugation-orbit counts must agree.

    The trivial group counts as a p-group at p = 2 (any prime works).
    """
    factors = {f for f in range(2, G.order + 1) if G.order % f == 0 and _is_prime(f)}
    if G.order == 1:
        factors = {2}
    if len(factors) != 1:
        raise HkrError(f"group of order {G.order} is not a p-group")
    (p,) = factors
    kwargs = {} if work_cap is None else {"work_cap": work_cap}
    homs = hom_tuples(G, p, n, **kwargs)
    alls = commuting_tuples_all(G, n, **kwargs)
    hom_classes = len(tuple_classes(G, p, n, **kwargs))
    all_classes = _tuple_orbit_count(G, alls)
    ok = len(homs) == len(alls) and hom_classes == all_classes
    return LoopsCheck(ok, len(homs), len(alls), hom_classes, all_classes)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True
