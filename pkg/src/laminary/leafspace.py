"""Finite model of a non-Hausdorff, simply connected leaf space.

Leaves are names.  ``segments`` are increasing chains whose union generates the
partial order; ``nonseparated`` lists incomparable pairs that are limits of a
common monotone family, approached from below (``Side.POSITIVE``) or from above
(``Side.NEGATIVE``).  The Hasse diagram of the order must be a tree, and so must
its quotient by the nonseparated clusters (the Hausdorffification).
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .errors import LeafSpaceError, NotOrderPreserving, UnknownLeaf


class Side(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @property
    def sign(self) -> str:
        return "+" if self is Side.POSITIVE else "-"

    def flipped(self) -> "Side":
        return Side.NEGATIVE if self is Side.POSITIVE else Side.POSITIVE

    @classmethod
    def parse(cls, text) -> "Side":
        if isinstance(text, Side):
            return text
        key = str(text).strip().lower()
        if key in ("+", "positive", "pos", "plus"):
            return cls.POSITIVE
        if key in ("-", "negative", "neg", "minus"):
            return cls.NEGATIVE
        raise ValueError(f"not a side: {text!r}")


class Branching(enum.Enum):
    R_COVERED = "RCovered"
    ONE_SIDED_POSITIVE = "OneSidedPositive"
    ONE_SIDED_NEGATIVE = "OneSidedNegative"
    TWO_SIDED = "TwoSided"


@dataclass(frozen=True)
class LeafAutomorphism:
    """A (possibly partial) permutation of leaves.

    A partial map models a symmetry of an infinite space seen through a finite
    window: it is only checked on its domain.
    """

    name: str
    mapping: Mapping[str, str] = field(hash=False)

    def __call__(self, leaf: str) -> str:
        try:
            return self.mapping[leaf]
        except KeyError:
            raise UnknownLeaf(leaf) from None

    def to_json(self):
        return {"name": self.name, "map": dict(sorted(self.mapping.items()))}


@dataclass(frozen=True)
class PathDecomposition:
    """Leaves visited and, for each step, whether it is a corner turn."""

    leaves: tuple[str, ...]
    corners: tuple[bool, ...]

    def reversed(self) -> "PathDecomposition":
        return PathDecomposition(self.leaves[::-1], self.corners[::-1])

    @property
    def corner_count(self) -> int:
        return sum(self.corners)


class LeafSpace:
    def __init__(self, leaves: Iterable[str], segments: Iterable[Iterable[str]] = (),
                 nonseparated: Iterable = (), automorphisms: Iterable[LeafAutomorphism] = ()):
        self.leaves: tuple[str, ...] = tuple(dict.fromkeys(leaves))
        if not self.leaves:
            raise LeafSpaceError("a leaf space needs at least one leaf")
        known = set(self.leaves)
        self.segments = tuple(tuple(s) for s in segments)
        for seg in self.segments:
            for leaf in seg:
                if leaf not in known:
                    raise UnknownLeaf(leaf)
            if len(set(seg)) != len(seg):
                raise LeafSpaceError(f"segment {list(seg)} repeats a leaf")
        pairs = []
        for item in nonseparated:
            if isinstance(item, Mapping):
                a, b = item["pair"]
                side = Side.parse(item.get("side", "positive"))
            else:
                a, b, side = item[0], item[1], Side.parse(item[2])
            for leaf in (a, b):
                if leaf not in known:
                    raise UnknownLeaf(leaf)
            if a == b:
                raise LeafSpaceError(f"leaf {a} cannot be nonseparated from itself")
            pairs.append((a, b, side))
        self.nonseparated = tuple(pairs)
        self.automorphisms = tuple(automorphisms)
        self._build_order()
        self._build_clusters()
        self._check_trees()

    # ----- construction helpers

    def _build_order(self):
        succ = {leaf: set() for leaf in self.leaves}
        for seg in self.segments:
            for a, b in zip(seg, seg[1:]):
                succ[a].add(b)
        above: dict[str, set[str]] = {}
        for leaf in self.leaves:
            seen, stack = set(), list(succ[leaf])
            while stack:
                x = stack.pop()
                if x not in seen:
                    seen.add(x)
                    stack.extend(succ[x])
            if leaf in seen:
                raise LeafSpaceError(f"segments force {leaf} < {leaf}: the order has a cycle")
            above[leaf] = seen
        self._above = above
        hasse = set()
        for a in self.leaves:
            for b in above[a]:
                if not any(b in above[c] for c in above[a]):
                    hasse.add((a, b))
        self.hasse_edges = tuple(sorted(hasse))
        self._hasse_adj = {leaf: [] for leaf in self.leaves}
        for a, b in self.hasse_edges:
            self._hasse_adj[a].append(b)
            self._hasse_adj[b].append(a)
        for nbrs in self._hasse_adj.values():
            nbrs.sort()

    def _build_clusters(self):
        parent = {leaf: leaf for leaf in self.leaves}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b, _ in self.nonseparated:
            if self.comparable(a, b):
                raise LeafSpaceError(f"nonseparated leaves {a} and {b} are comparable")
            parent[find(a)] = find(b)
        clusters: dict[str, list[str]] = {}
        for leaf in self.leaves:
            clusters.setdefault(find(leaf), []).append(leaf)
        self._cluster_of = {}
        self._cluster_side: dict[str, Side | None] = {}
        for members in clusters.values():
            key = min(members)
            for m in members:
                self._cluster_of[m] = key
            sides = {side for a, b, side in self.nonseparated if a in members}
            if len(sides) > 1:
                raise LeafSpaceError(f"cluster {sorted(members)} carries both side tags")
            self._cluster_side[key] = sides.pop() if sides else None
            for a, b in combinations(sorted(members), 2):
                if self.comparable(a, b):
                    raise LeafSpaceError(f"leaves {a} and {b} share a cluster but are comparable")
        for a, b, side in self.nonseparated:
            if side is Side.POSITIVE:
                ok = any(self.less(c, a) and self.less(c, b) for c in self.leaves)
                where = "below"
            else:
                ok = any(self.less(a, c) and self.less(b, c) for c in self.leaves)
                where = "above"
            if not ok:
                raise LeafSpaceError(f"no leaf lies {where} both {a} and {b}, "
                                     f"as their {side.value} side tag requires")

    def _check_trees(self):
        n = len(self.leaves)
        if len(self.hasse_edges) != n - 1 or not self._hasse_connected():
            raise LeafSpaceError("the covering graph of the order is not a tree")
        quotient = {(min(self._cluster_of[a], self._cluster_of[b]),
                     max(self._cluster_of[a], self._cluster_of[b])) for a, b in self.hasse_edges}
        if any(a == b for a, b in quotient):
            raise LeafSpaceError("a covering relation joins two leaves of one cluster")
        nodes = set(self._cluster_of.values())
        if len(quotient) != len(nodes) - 1:
            raise LeafSpaceError("the Hausdorffification is not a tree")
        self._quotient_adj = {c: set() for c in nodes}
        for a, b in quotient:
            self._quotient_adj[a].add(b)
            self._quotient_adj[b].add(a)

    def _hasse_connected(self) -> bool:
        start = self.leaves[0]
        seen, stack = {start}, [start]
        while stack:
            for y in self._hasse_adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.leaves)

    # ----- order queries

    def _check(self, *leaves):
        for leaf in leaves:
            if leaf not in self._above:
                raise UnknownLeaf(leaf)

    def less(self, a: str, b: str) -> bool:
        self._check(a, b)
        return b in self._above[a]

    def comparable(self, a: str, b: str) -> bool:
        return a == b or self.less(a, b) or self.less(b, a)

    def above(self, a: str) -> set[str]:
        self._check(a)
        return set(self._above[a])

    def below(self, a: str) -> set[str]:
        self._check(a)
        return {b for b in self.leaves if a in self._above[b]}

    def hasse_neighbours(self, a: str) -> list[str]:
        self._check(a)
        return list(self._hasse_adj[a])

    def hasse_path(self, a: str, b: str) -> list[str]:
        """The unique path from ``a`` to ``b`` in the covering tree."""
        self._check(a, b)
        prev = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for y in self._hasse_adj[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        return path[::-1]

    def cluster(self, a: str) -> list[str]:
        self._check(a)
        key = self._cluster_of[a]
        return sorted(x for x in self.leaves if self._cluster_of[x] == key)

    def cluster_side(self, a: str) -> Side | None:
        self._check(a)
        return self._cluster_side[self._cluster_of[a]]

    def nonseparated_with(self, a: str, b: str) -> bool:
        return a != b and self._cluster_of[a] == self._cluster_of[b]

    # ----- derived structure

    def positive_side(self, base: str, other: str) -> Side:
        self._check(base, other)
        if base == other:
            raise ValueError("positive_side needs two distinct leaves")
        own = self._cluster_of[base]
        side = self._cluster_side[own]
        if self._cluster_of[other] == own:
            return side.flipped()
        target = self._cluster_of[other]
        prev = {own: None}
        queue = deque([own])
        while queue:
            x = queue.popleft()
            for y in sorted(self._quotient_adj[x]):
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        step = target
        while prev[step] != own:
            step = prev[step]
        for y in self._hasse_adj[base]:
            if self._cluster_of[y] == step:
                return Side.POSITIVE if self.less(base, y) else Side.NEGATIVE
        # the branch hangs off another member of base's cluster
        return side.flipped()

    def classify_branching(self) -> Branching:
        sides = {side for _, _, side in self.nonseparated}
        if not sides:
            return Branching.R_COVERED
        if sides == {Side.POSITIVE}:
            return Branching.ONE_SIDED_POSITIVE
        if sides == {Side.NEGATIVE}:
            return Branching.ONE_SIDED_NEGATIVE
        return Branching.TWO_SIDED

    def branching_sides(self) -> set[Side]:
        return {side for _, _, side in self.nonseparated}

    def path_decompose(self, a: str, b: str) -> PathDecomposition:
        """Alternating comparable runs and corner turns from ``a`` to ``b``.

        Computed in one canonical direction so that swapping the endpoints
        exactly reverses the answer.
        """
        self._check(a, b)
        if b < a:
            return self.path_decompose(b, a).reversed()
        adj = {leaf: set(self._hasse_adj[leaf]) for leaf in self.leaves}
        for x in self.leaves:
            for y in self.cluster(x):
                if y != x:
                    adj[x].add(y)
        prev = {a: None}
        queue = deque([a])
        while queue and b not in prev:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        walk = [b]
        while walk[-1] != a:
            walk.append(prev[walk[-1]])
        walk.reverse()
        leaves, corners = [walk[0]], []
        direction = None
        for x, y in zip(walk, walk[1:]):
            if self.nonseparated_with(x, y):
                if leaves[-1] != x:
                    leaves.append(x)
                    corners.append(False)
                leaves.append(y)
                corners.append(True)
                direction = None
                continue
            step = self.less(x, y)
            if direction is not None and step != direction and leaves[-1] != x:
                leaves.append(x)
                corners.append(False)
            direction = step
        if leaves[-1] != b:
            leaves.append(b)
            corners.append(False)
        return PathDecomposition(tuple(leaves), tuple(corners))

    # ----- automorphisms

    def automorphism(self, name: str) -> LeafAutomorphism:
        for g in self.automorphisms:
            if g.name == name:
                return g
        raise KeyError(name)

    def apply_automorphism(self, g: LeafAutomorphism, a: str) -> str:
        self._check(a)
        return g(a)

    def verify_automorphism(self, g: LeafAutomorphism) -> None:
        """Raise :class:`NotOrderPreserving` unless ``g`` respects order and sides."""
        dom = [leaf for leaf in self.leaves if leaf in g.mapping]
        for leaf, image in g.mapping.items():
            self._check(leaf, image)
        if len(set(g.mapping.values())) != len(g.mapping):
            raise NotOrderPreserving(f"{g.name} is not injective", ())
        for a in dom:
            for b in dom:
                if a != b and self.less(a, b) != self.less(g(a), g(b)):
                    raise NotOrderPreserving(
                        f"{g.name} does not preserve the order on ({a}, {b})", (a, b))
        for a, b in combinations(dom, 2):
            if self.nonseparated_with(a, b) != self.nonseparated_with(g(a), g(b)):
                raise NotOrderPreserving(f"{g.name} breaks nonseparation of ({a}, {b})", (a, b))
            if self.nonseparated_with(a, b) and self.cluster_side(a) != self.cluster_side(g(a)):
                raise NotOrderPreserving(f"{g.name} flips the side tag of ({a}, {b})", (a, b))

    def is_total(self, g: LeafAutomorphism) -> bool:
        return set(g.mapping) == set(self.leaves)

    # ----- serialization

    def to_json(self):
        return {
            "leaves": list(self.leaves),
            "segments": [list(s) for s in self.segments],
            "nonseparated": [{"pair": [a, b], "side": side.value} for a, b, side in self.nonseparated],
            "automorphisms": [g.to_json() for g in self.automorphisms],
        }

    @classmethod
    def from_json(cls, data) -> "LeafSpace":
        autos = [LeafAutomorphism(a["name"], dict(a["map"])) for a in data.get("automorphisms", [])]
        return cls(data["leaves"], data.get("segments", []), data.get("nonseparated", []), autos)

    def __repr__(self) -> str:
        return f"LeafSpace({len(self.leaves)} leaves, {len(self.nonseparated)} nonseparated pairs)"
