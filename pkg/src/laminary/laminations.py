"""Finite laminations of the circle and laminar equivalence relations."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .circle import CirclePoint, Linking, PointPair, format_rational, linked, parse_rational, pt
from .errors import Crossing, NotLaminar

Chord = PointPair


def chord(a, b) -> Chord:
    return PointPair(a, b)


@dataclass(frozen=True)
class Lamination:
    """A finite set of pairwise unlinked chords, kept canonically sorted.

    Build instances with :func:`make_lamination`; the constructor assumes the
    leaves were already checked.
    """

    leaves: tuple[Chord, ...] = ()

    def __iter__(self):
        return iter(self.leaves)

    def __len__(self):
        return len(self.leaves)

    def __contains__(self, c) -> bool:
        return c in self.leaves

    def __bool__(self):
        return bool(self.leaves)

    def __repr__(self) -> str:
        return "Lamination(" + ", ".join(repr(c) for c in self.leaves) + ")"

    def endpoints(self) -> list[CirclePoint]:
        return sorted({p for c in self.leaves for p in c})

    def to_json(self) -> list[list[str]]:
        return [[str(c.a), str(c.b)] for c in self.leaves]

    @classmethod
    def from_json(cls, data) -> "Lamination":
        return make_lamination(PointPair(parse_rational(a), parse_rational(b)) for a, b in data)


def first_crossing(chords: Iterable[Chord]):
    """Return a linked pair of chords, or None.  Plain O(n^2) scan."""
    cs = list(chords)
    for c1, c2 in combinations(cs, 2):
        if linked(c1, c2) is Linking.LINKED:
            return c1, c2
    return None


def make_lamination(chords: Iterable[Chord]) -> Lamination:
    leaves = tuple(sorted(set(chords)))
    witness = first_crossing(leaves)
    if witness is not None:
        raise Crossing(*witness)
    return Lamination(leaves)


def boundary_hull(points: Iterable) -> Lamination:
    """Sides of the ideal polygon spanned by a finite point set."""
    ps = sorted({pt(p) for p in points})
    if len(ps) < 2:
        return Lamination()
    if len(ps) == 2:
        return Lamination((PointPair(ps[0], ps[1]),))
    sides = {PointPair(ps[i], ps[(i + 1) % len(ps)]) for i in range(len(ps))}
    return Lamination(tuple(sorted(sides)))


@dataclass(frozen=True)
class LaminarRelation:
    """Equivalence relation given by its nontrivial classes (each of size >= 2)."""

    classes: tuple[frozenset, ...]

    def __init__(self, classes: Iterable[Iterable] = ()):
        normalized = []
        seen: set[CirclePoint] = set()
        for cls in classes:
            members = frozenset(pt(p) for p in cls)
            if len(members) < 2:
                raise ValueError(f"class {sorted(members)} has fewer than two points")
            if members & seen:
                raise ValueError(f"classes overlap at {sorted(members & seen)}")
            seen |= members
            normalized.append(members)
        normalized.sort(key=lambda c: sorted(c))
        object.__setattr__(self, "classes", tuple(normalized))

    def __repr__(self) -> str:
        inner = "; ".join("{" + ",".join(format_rational(p.turn) for p in sorted(c)) + "}"
                          for c in self.classes)
        return f"LaminarRelation({inner})"

    def check(self) -> None:
        """Raise :class:`NotLaminar` if two classes are linked as subsets."""
        for c1, c2 in combinations(self.classes, 2):
            if sets_linked(c1, c2):
                raise NotLaminar(c1, c2)


def sets_linked(first: Iterable[CirclePoint], second: Iterable[CirclePoint]) -> bool:
    """True iff some pair from ``first`` links some disjoint pair from ``second``."""
    a = sorted(set(first))
    b = sorted(set(second))
    for a1, a2 in combinations(a, 2):
        pa = PointPair(a1, a2)
        for b1, b2 in combinations(b, 2):
            if linked(pa, PointPair(b1, b2)) is Linking.LINKED:
                return True
    return False


def relation_to_lamination(rel: LaminarRelation) -> Lamination:
    rel.check()
    leaves: set[Chord] = set()
    for cls in rel.classes:
        leaves.update(boundary_hull(cls).leaves)
    return make_lamination(leaves)


def lamination_to_relation(lam: Lamination) -> LaminarRelation:
    """Classes are the connected components of the endpoint-sharing graph."""
    parent: dict[CirclePoint, CirclePoint] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in lam:
        for p in c:
            parent.setdefault(p, p)
        ra, rb = find(c.a), find(c.b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[CirclePoint, set] = {}
    for p in parent:
        groups.setdefault(find(p), set()).add(p)
    return LaminarRelation(groups.values())
