"""Finite permutation groups: full enumeration, conjugacy classes, centralizers,
and a small expression language for the standard families.

Groups are always materialized as their complete element list, sorted
lexicographically by image tuple.  That order is the canonical element order
used everywhere else in the package, so that repeated runs produce identical
output byte for byte.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import CapExceeded, ParseError

__all__ = [
    "Permutation",
    "FiniteGroup",
    "ConjugacyClass",
    "make_group",
    "named_group",
    "conjugacy_classes",
    "centralizer",
    "direct_product",
    "cyc_group",
    "dih_group",
    "sym_group",
    "q8_group",
    "DEFAULT_ORDER_CAP",
]

DEFAULT_ORDER_CAP = 100_000


class Permutation:
    """A bijection of {0, ..., degree-1}, stored as its tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images!r}")
        self.images = images

    @classmethod
    def _raw(cls, images: tuple[int, ...]) -> Permutation:
        # Internal constructor that skips validation.
        p = object.__new__(cls)
        p.images = images
        return p

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles) -> Permutation:
        """Build from disjoint cycles of points, e.g. from_cycles(4, [(0, 1), (2, 3)])."""
        images = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for pt in cyc:
                if not 0 <= pt < degree:
                    raise ValueError(f"point {pt} out of range for degree {degree}")
                if pt in seen:
                    raise ValueError(f"cycles are not disjoint at point {pt}")
                seen.add(pt)
            for i, pt in enumerate(cyc):
                images[pt] = cyc[(i + 1) % len(cyc)]
        return cls._raw(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: Permutation) -> Permutation:
        # (a * b)(i) = a(b(i)): apply b first.
        return Permutation._raw(tuple(map(self.images.__getitem__, other.images)))

    def inverse(self) -> Permutation:
        img = self.images
        inv = [0] * len(img)
        for i, j in enumerate(img):
            inv[j] = i
        return Permutation._raw(tuple(inv))

    def conjugate_by(self, g: Permutation) -> Permutation:
        """g * self * g^(-1), computed in one pass."""
        gi = g.images
        si = self.images
        out = [0] * len(si)
        for i, j in enumerate(si):
            out[gi[i]] = gi[j]
        return Permutation._raw(tuple(out))

    def __pow__(self, k: int) -> Permutation:
        n = len(self.images)
        out = [0] * n
        for cyc in self._all_cycles():
            ln = len(cyc)
            s = k % ln
            for i, pt in enumerate(cyc):
                out[pt] = cyc[(i + s) % ln]
        return Permutation._raw(tuple(out))

    def _all_cycles(self) -> list[list[int]]:
        img = self.images
        seen = [False] * len(img)
        cycles = []
        for start in range(len(img)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = img[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = img[j]
            cycles.append(cyc)
        return cycles

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each rotated to start at its least point."""
        return [tuple(c) for c in self._all_cycles() if len(c) > 1]

    def cycle_lengths(self) -> list[int]:
        """Lengths of all cycles, fixed points included, sorted descending."""
        return sorted((len(c) for c in self._all_cycles()), reverse=True)

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self._all_cycles()))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __le__(self, other: Permutation) -> bool:
        return self.images <= other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation[{self.cycle_string()}]"


class FiniteGroup:
    """An immutable permutation group with a fully materialized element list.

    `elements` is sorted lexicographically by image tuple; `generators` is the
    generating set the group was built from.  Instances cache derived data
    (conjugacy classes, abelianness) since they are never mutated.
    """

    __slots__ = ("degree", "generators", "elements", "name", "_set", "_cache")

    def __init__(self, degree, generators, elements, name=None):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.name = name
        self._set = frozenset(self.elements)
        self._cache: dict = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __contains__(self, g: Permutation) -> bool:
        return g in self._set

    def __iter__(self):
        return iter(self.elements)

    def is_abelian(self) -> bool:
        got = self._cache.get("abelian")
        if got is None:
            gens = self.generators
            got = all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1 :])
            self._cache["abelian"] = got
        return got

    def exponent(self) -> int:
        got = self._cache.get("exponent")
        if got is None:
            got = math.lcm(*(g.order() for g in self.elements))
            self._cache["exponent"] = got
        return got

    def __repr__(self) -> str:
        label = self.name or f"degree {self.degree}"
        return f"FiniteGroup[{label}, order {self.order}]"


@dataclass(frozen=True)
class ConjugacyClass:
    """One conjugacy class: sorted members, least member as representative."""

    representative: Permutation
    members: tuple[Permutation, ...]
    centralizer_order: int

    @property
    def size(self) -> int:
        return len(self.members)


def make_group(degree, generators, *, order_cap=DEFAULT_ORDER_CAP, name=None) -> FiniteGroup:
    """Close a generating set under multiplication.

    Breadth-first closure; raises CapExceeded as soon as the element count
    passes order_cap (default 100000).
    """
    gens = []
    for g in generators:
        if not isinstance(g, Permutation):
            g = Permutation(g)
        if g.degree != degree:
            raise ValueError(f"generator degree {g.degree} does not match {degree}")
        if not g.is_identity():
            gens.append(g)
    ident = Permutation.identity(degree)
    elems = {ident}
    frontier = [ident]
    while frontier:
        next_frontier = []
        for a in frontier:
            for g in gens:
                b = g * a
                if b not in elems:
                    if len(elems) >= order_cap:
                        raise CapExceeded(
                            f"group order exceeds order cap {order_cap}"
                        )
                    elems.add(b)
                    next_frontier.append(b)
        frontier = next_frontier
    return FiniteGroup(degree, gens or [ident], sorted(elems), name=name)


def _closure(degree: int, gens: list[Permutation]) -> set[Permutation]:
    ident = Permutation.identity(degree)
    elems = {ident}
    frontier = [ident]
    while frontier:
        next_frontier = []
        for a in frontier:
            for g in gens:
                b = g * a
                if b not in elems:
                    elems.add(b)
                    next_frontier.append(b)
        frontier = next_frontier
    return elems


def _minimal_generators(degree: int, elements) -> list[Permutation]:
    """Greedy small generating set for a group given by its element list."""
    gens: list[Permutation] = []
    closed: set[Permutation] = {Permutation.identity(degree)}
    for g in elements:
        if g not in closed:
            gens.append(g)
            closed = _closure(degree, gens)
            if len(closed) == len(elements):
                break
    return gens or [Permutation.identity(degree)]


def _from_elements(degree, elements, name=None) -> FiniteGroup:
    """Wrap an element list that is already known to be closed (e.g. a centralizer)."""
    elements = sorted(elements)
    return FiniteGroup(degree, _minimal_generators(degree, elements), elements, name=name)


def conjugacy_classes(G: FiniteGroup) -> list[ConjugacyClass]:
    """Conjugacy classes in canonical order: by size, then least representative.

    Each class is found as the closure of one element under conjugation by the
    group's generators; centralizer orders come from the orbit-stabilizer count.
    """
    got = G._cache.get("classes")
    if got is not None:
        return got
    gens = G.generators
    assigned: set[Permutation] = set()
    classes = []
    for g in G.elements:
        if g in assigned:
            continue
        orbit = {g}
        frontier = [g]
        while frontier:
            next_frontier = []
            for h in frontier:
                for s in gens:
                    c = h.conjugate_by(s)
                    if c not in orbit:
                        orbit.add(c)
                        next_frontier.append(c)
            frontier = next_frontier
        assigned |= orbit
        members = tuple(sorted(orbit))
        classes.append(
            ConjugacyClass(members[0], members, G.order // len(members))
        )
    classes.sort(key=lambda c: (c.size, c.representative.images))
    G._cache["classes"] = classes
    return classes


def centralizer(G: FiniteGroup, S) -> FiniteGroup:
    """Centralizer of a set of elements of G, as a group on the same points."""
    S = list(S)
    for s in S:
        if s not in G:
            raise ValueError(f"{s!r} is not an element of the group")
    elems = [g for g in G.elements if all(g * s == s * g for s in S)]
    return _from_elements(G.degree, elems)


def direct_product(A: FiniteGroup, B: FiniteGroup, name=None) -> FiniteGroup:
    """Direct product acting on the disjoint union of the two point sets."""
    d = A.degree + B.degree
    gens = []
    for g in A.generators:
        gens.append(Permutation._raw(g.images + tuple(range(A.degree, d))))
    shift = A.degree
    for h in B.generators:
        gens.append(
            Permutation._raw(tuple(range(shift)) + tuple(i + shift for i in h.images))
        )
    if name is None:
        name = f"{A.name or '?'}*{B.name or '?'}"
    order_cap = max(DEFAULT_ORDER_CAP, A.order * B.order + 1)
    return make_group(d, gens, order_cap=order_cap, name=name)


def sym_group(m: int) -> FiniteGroup:
    if m < 0:
        raise ParseError("Sym(m) needs m >= 0")
    degree = max(m, 0)
    if m <= 1:
        return make_group(degree, [], name=f"Sym({m})")
    gens = [
        Permutation.from_cycles(m, [(0, 1)]),
        Permutation.from_cycles(m, [tuple(range(m))]),
    ]
    return make_group(m, gens, name=f"Sym({m})")


def cyc_group(m: int) -> FiniteGroup:
    if m < 1:
        raise ParseError("Cyc(m) needs m >= 1")
    if m == 1:
        return make_group(1, [], name="Cyc(1)")
    gen = Permutation.from_cycles(m, [tuple(range(m))])
    return make_group(m, [gen], name=f"Cyc({m})")


def dih_group(m: int) -> FiniteGroup:
    """Dihedral group of order 2m on the vertices of an m-gon.

    Dih(1) and Dih(2) are degenerate; they are realized faithfully on two and
    four points respectively.
    """
    if m < 1:
        raise ParseError("Dih(m) needs m >= 1")
    if m == 1:
        return make_group(2, [Permutation.from_cycles(2, [(0, 1)])], name="Dih(1)")
    if m == 2:
        gens = [
            Permutation.from_cycles(4, [(0, 1)]),
            Permutation.from_cycles(4, [(2, 3)]),
        ]
        return make_group(4, gens, name="Dih(2)")
    rot = Permutation.from_cycles(m, [tuple(range(m))])
    refl = Permutation._raw(tuple((m - i) % m for i in range(m)))
    return make_group(m, [rot, refl], name=f"Dih({m})")


def q8_group() -> FiniteGroup:
    """The quaternion group of order 8, in its regular representation.

    Points 0..7 stand for 1, i, -1, -i, j, k, -j, -k; the generators are left
    multiplication by i and by j.
    """
    a = Permutation.from_cycles(8, [(0, 1, 2, 3), (4, 5, 6, 7)])
    b = Permutation.from_cycles(8, [(0, 4, 2, 6), (1, 7, 3, 5)])
    return make_group(8, [a, b], name="Q8")


_TOKEN = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*|\d+|[()*;,])")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r} in group expression")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _SpecParser:
    """Recursive-descent parser for group expressions.

    Grammar (whitespace-insensitive between tokens):

        expr    := atom ("*" atom)*
        atom    := "Sym" "(" INT ")" | "Cyc" "(" INT ")" | "Dih" "(" INT ")"
                 | "Q8" | "Perm" "(" INT ";" gens ")" | "(" expr ")"
        gens    := gen ("," gen)*
        gen     := cycle+
        cycle   := "(" INT+ ")"
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of group expression {self.text!r}")
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r} but found {tok!r} in {self.text!r}")
        self.pos += 1
        return tok

    def take_int(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise ParseError(f"expected an integer but found {tok!r} in {self.text!r}")
        return int(tok)

    def parse(self) -> FiniteGroup:
        g = self.parse_expr()
        if self.peek() is not None:
            raise ParseError(f"trailing tokens after group expression: {self.peek()!r}")
        return g

    def parse_expr(self) -> FiniteGroup:
        g = self.parse_atom()
        while self.peek() == "*":
            self.take("*")
            h = self.parse_atom()
            g = direct_product(g, h, name=f"{g.name}*{h.name}")
        return g

    def parse_atom(self) -> FiniteGroup:
        tok = self.peek()
        if tok == "(":
            self.take("(")
            g = self.parse_expr()
            self.take(")")
            return g
        if tok == "Q8":
            self.take()
            return q8_group()
        if tok in ("Sym", "Cyc", "Dih"):
            self.take()
            self.take("(")
            m = self.take_int()
            self.take(")")
            return {"Sym": sym_group, "Cyc": cyc_group, "Dih": dih_group}[tok](m)
        if tok == "Perm":
            return self.parse_perm()
        raise ParseError(f"expected a group name but found {tok!r} in {self.text!r}")

    def parse_perm(self) -> FiniteGroup:
        self.take("Perm")
        self.take("(")
        degree = self.take_int()
        self.take(";")
        gens = [self.parse_generator(degree)]
        while self.peek() == ",":
            self.take(",")
            gens.append(self.parse_generator(degree))
        self.take(")")
        name = f"Perm({degree}; " + ", ".join(g.cycle_string() for g in gens) + ")"
        return make_group(degree, gens, name=name)

    def parse_generator(self, degree: int) -> Permutation:
        cycles = [self.parse_cycle()]
        while self.peek() == "(":
            cycles.append(self.parse_cycle())
        try:
            return Permutation.from_cycles(degree, cycles)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    def parse_cycle(self) -> tuple[int, ...]:
        self.take("(")
        pts = []
        while self.peek() != ")":
            pts.append(self.take_int())
        self.take(")")
        if not pts:
            raise ParseError("empty cycle in group expression")
        return tuple(pts)


_named_cache: dict[str, FiniteGroup] = {}


def named_group(spec: str) -> FiniteGroup:
    """Parse a group expression like "Sym(3)", "Cyc(2)*Cyc(4)", or
    "Perm(4; (0 1)(2 3), (0 2))" and build the group.

    Results are shared per spec string: groups are immutable, and sharing
    lets derived data (classes, tables) be computed once per process.
    """
    key = "".join(spec.split())
    got = _named_cache.get(key)
    if got is None:
        got = _SpecParser(spec).parse()
        _named_cache[key] = got
    return got
