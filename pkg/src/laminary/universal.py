"""Universal circles from finite marker data.

A :class:`Scenario` is a leaf space whose leaves carry finitely many named marks
on their circles at infinity, together with markers (chains of marks on
consecutive comparable leaves) and optional symmetries.  Every mark launches a
special section; sections are compared by lifting them to the universal cover
of the circle bundle, and the sorted lifts give the circular order of the
finite universal circle.

The circles of different leaves are identified through the turn coordinate.  A
marker step from ``p`` on one leaf to ``q`` on the next moves by the
representative of ``q - p`` in (-1/2, 1/2]; this is what "short" means here.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from fractions import Fraction
from typing import Iterable, Mapping

from .circle import Arc, CirclePoint, ccw_distance, format_rational, parse_rational, pt
from .errors import (InvariantViolation, LaminaryError, NoCommonComparableLeaf, ScenarioError,
                     UnknownLeaf)
from .leafspace import LeafAutomorphism, LeafSpace, Side
from .monotone import CoreSet, MonotoneMap, containing_gap

HALF = Fraction(1, 2)


def short_step(p: CirclePoint, q: CirclePoint) -> Fraction:
    """Signed displacement from ``p`` to ``q`` in (-1/2, 1/2]."""
    d = ccw_distance(p, q)
    return d if d <= HALF else d - 1


def marker_step(p: CirclePoint, q: CirclePoint, up: bool) -> Fraction:
    """Displacement along a marker from ``p`` to ``q``.

    Measured upward and negated going down, so a half-turn marker is
    traversed consistently in both directions.
    """
    return short_step(p, q) if up else -short_step(q, p)


def section_name(leaf: str, mark: str) -> str:
    return f"s({leaf},{mark})"


# --------------------------------------------------------------------------
# scenario data


@dataclass(frozen=True)
class Marker:
    name: str
    support: tuple[str, ...]
    marks: tuple[str, ...]

    def mark_at(self, leaf: str) -> str | None:
        try:
            return self.marks[self.support.index(leaf)]
        except ValueError:
            return None

    def spans(self, a: str, b: str) -> bool:
        return a in self.support and b in self.support

    def to_json(self):
        return {"name": self.name, "support": list(self.support), "points": list(self.marks)}


@dataclass(frozen=True)
class Generator:
    """A leaf automorphism with the induced bijections between mark sets."""

    name: str
    leaf_map: LeafAutomorphism
    mark_maps: Mapping[str, Mapping[str, str]] = field(hash=False)

    def image(self, leaf: str, mark: str) -> tuple[str, str]:
        return self.leaf_map(leaf), self.mark_maps[leaf][mark]

    def to_json(self):
        return {"name": self.name, "leaves": dict(sorted(self.leaf_map.mapping.items())),
                "marks": {k: dict(sorted(v.items())) for k, v in sorted(self.mark_maps.items())}}


class Scenario:
    def __init__(self, space: LeafSpace, circles: Mapping[str, Mapping[str, object]],
                 markers: Iterable[Marker] = (), generators: Iterable[Generator] = (),
                 name: str = "scenario"):
        self.name = name
        self.space = space
        self.circles = {leaf: {m: pt(p) for m, p in marks.items()} for leaf, marks in circles.items()}
        self.markers = tuple(markers)
        self.generators = tuple(generators)

    def point(self, leaf: str, mark: str) -> CirclePoint:
        try:
            return self.circles[leaf][mark]
        except KeyError:
            raise ScenarioError("UnknownMark", f"leaf {leaf} has no mark {mark!r}", (leaf, mark)) from None

    def marks(self, leaf: str) -> list[str]:
        return sorted(self.circles.get(leaf, {}), key=lambda m: (self.circles[leaf][m], m))

    def spanning(self, a: str, b: str) -> list[Marker]:
        return [m for m in self.markers if m.spans(a, b)]

    # ----- serialization

    @classmethod
    def from_json(cls, data) -> "Scenario":
        try:
            space = LeafSpace.from_json(data)
            circles = {leaf: {m: parse_rational(p) for m, p in marks.items()}
                       for leaf, marks in data.get("circles", {}).items()}
            markers = []
            for i, m in enumerate(data.get("markers", [])):
                markers.append(Marker(m.get("name", f"m{i}"), tuple(m["support"]), tuple(m["points"])))
            gens = []
            for g in data.get("generators", []):
                gens.append(Generator(g["name"], LeafAutomorphism(g["name"], dict(g["leaves"])),
                                      {k: dict(v) for k, v in g.get("marks", {}).items()}))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError("MalformedScenario", str(exc)) from exc
        return cls(space, circles, markers, gens, data.get("name", "scenario"))

    def to_json(self):
        out = {"name": self.name}
        out.update(self.space.to_json())
        out["circles"] = {leaf: {m: str(self.circles[leaf][m]) for m in self.marks(leaf)}
                          for leaf in self.space.leaves if leaf in self.circles}
        out["markers"] = [m.to_json() for m in self.markers]
        out["generators"] = [g.to_json() for g in self.generators]
        return out


@dataclass
class ValidationReport:
    scenario: str
    checked_markers: int
    checked_pairs: int
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return True


def validate_scenario(s: Scenario) -> ValidationReport:
    """Raise :class:`ScenarioError` on the first violated rule; otherwise report."""
    space = s.space
    for leaf in s.circles:
        if leaf not in space.leaves:
            raise ScenarioError("UnknownLeaf", f"circle given for unknown leaf {leaf}", (leaf,))
    for leaf in space.leaves:
        marks = s.circles.get(leaf, {})
        if len(marks) < 2:
            raise ScenarioError("TooFewMarks", f"leaf {leaf} needs at least two marks", (leaf,))
        if len(set(marks.values())) != len(marks):
            raise ScenarioError("DuplicateMark", f"two marks of {leaf} share a position", (leaf,))
    for m in s.markers:
        if len(m.support) != len(m.marks) or len(m.support) < 2:
            raise ScenarioError("MalformedMarker", f"marker {m.name} needs one mark per leaf, "
                                "on at least two leaves", (m.name,))
        for leaf, mark in zip(m.support, m.marks):
            if leaf not in space.leaves:
                raise ScenarioError("UnknownLeaf", f"marker {m.name} uses unknown leaf {leaf}", (m.name, leaf))
            s.point(leaf, mark)
        for a, b in zip(m.support, m.support[1:]):
            if not space.less(a, b):
                raise ScenarioError("DisconnectedSupport",
                                    f"marker {m.name} support is not increasing at ({a}, {b})", (m.name, a, b))
            if b not in space.hasse_neighbours(a):
                raise ScenarioError("DisconnectedSupport",
                                    f"marker {m.name} skips a leaf between {a} and {b}", (m.name, a, b))
    pairs = 0
    for i, m1 in enumerate(s.markers):
        for m2 in s.markers[i + 1:]:
            for a, b in zip(m1.support, m1.support[1:]):
                if not m2.spans(a, b):
                    continue
                pairs += 1
                if _markers_cross(s, m1, m2, a, b):
                    raise ScenarioError("CrossingMarkers",
                                        f"markers {m1.name} and {m2.name} cross between {a} and {b}",
                                        (m1.name, m2.name, a, b))
    warnings = []
    for g in s.generators:
        _validate_generator(s, g)
        if not space.is_total(g.leaf_map):
            warnings.append(f"generator {g.name} is partial; it is checked on its domain only")
    return ValidationReport(s.name, len(s.markers), pairs, warnings)


def _markers_cross(s, m1, m2, a, b) -> bool:
    pa1, pa2 = s.point(a, m1.mark_at(a)), s.point(a, m2.mark_at(a))
    if pa1 == pa2:
        return False
    lift_a2 = ccw_distance(pa1, pa2)
    lift_b1 = short_step(pa1, s.point(b, m1.mark_at(b)))
    lift_b2 = lift_a2 + short_step(pa2, s.point(b, m2.mark_at(b)))
    return not (lift_b1 <= lift_b2 <= lift_b1 + 1)


def _validate_generator(s: Scenario, g: Generator) -> None:
    space = s.space
    try:
        space.verify_automorphism(g.leaf_map)
    except LaminaryError as exc:
        raise ScenarioError("BadGenerator", f"generator {g.name}: {exc}", (g.name,)) from exc
    for leaf, image in g.leaf_map.mapping.items():
        mm = g.mark_maps.get(leaf)
        if mm is None or set(mm) != set(s.circles[leaf]) or set(mm.values()) != set(s.circles[image]):
            raise ScenarioError("BadGenerator",
                                f"generator {g.name} needs a bijection from the marks of {leaf} "
                                f"to the marks of {image}", (g.name, leaf))


# --------------------------------------------------------------------------
# leftmost extension and turning corners


@dataclass(frozen=True)
class CornerTurn:
    source: str
    target: str
    via: str
    gap: Arc
    mark: str


def _step(s: Scenario, a: str, b: str, v: CirclePoint) -> tuple[str, Fraction]:
    """One leftmost step from leaf ``a`` (value ``v``) to a covering neighbour ``b``.

    Returns the mark reached on ``b`` and the lifted displacement.  Upward
    steps are clockwisemost, downward steps anticlockwisemost.
    """
    up = s.space.less(a, b)
    spanning = s.spanning(a, b)
    if spanning:
        best = None
        for m in spanning:
            pa, pb = s.point(a, m.mark_at(a)), s.point(b, m.mark_at(b))
            reach = -ccw_distance(pa, v) if up else ccw_distance(v, pa)
            lifted = reach + marker_step(pa, pb, up)
            key = (abs(reach), lifted if up else -lifted, m.mark_at(b))
            if best is None or key < best[0]:
                best = (key, m.mark_at(b), lifted)
        return best[1], best[2]
    candidates = []
    for mark in s.marks(b):
        q = s.point(b, mark)
        d = ccw_distance(q, v) if up else ccw_distance(v, q)
        candidates.append((d, mark))
    d, mark = min(candidates)
    return mark, (-d if up else d)


def _lift_step(s: Scenario, a: str, b: str, v: CirclePoint, w: CirclePoint) -> Fraction:
    """Lifted displacement of a section whose values at ``a`` and ``b`` are known.

    The leftmost step is replayed; if it lands elsewhere than ``w`` (which only
    happens when the value at ``b`` came from a corner) the section continues
    in the same rotational direction until it reaches ``w``.
    """
    mark, d = _step(s, a, b, v)
    landed = s.point(b, mark)
    if s.space.less(a, b):
        return d - ccw_distance(w, landed)
    return d + ccw_distance(landed, w)


def turn_corner(s: Scenario, source: str, target: str) -> CornerTurn:
    """Value on ``target`` of every section crossing from the nonseparated ``source``."""
    space = s.space
    if not space.nonseparated_with(source, target):
        raise ScenarioError("NotNonseparated", f"{source} and {target} are not nonseparated",
                            (source, target))
    side = space.cluster_side(source)
    if side is Side.POSITIVE:
        common = [c for c in space.leaves if space.less(c, source) and space.less(c, target)]
        common.sort(key=lambda c: len(space.below(c)), reverse=True)
    else:
        common = [c for c in space.leaves if space.less(source, c) and space.less(target, c)]
        common.sort(key=lambda c: len(space.above(c)), reverse=True)
    for nu in common:
        src = [m for m in s.markers if m.spans(nu, source)]
        dst = [m for m in s.markers if m.spans(nu, target)]
        if src and dst:
            break
    else:
        raise NoCommonComparableLeaf(
            f"no leaf comparable with both {source} and {target} carries markers to each")
    src_pts = {s.point(nu, m.mark_at(nu)) for m in src}
    by_pos: dict[CirclePoint, list[Marker]] = {}
    for m in dst:
        by_pos.setdefault(s.point(nu, m.mark_at(nu)), []).append(m)
    ring = sorted(by_pos)
    if src_pts & set(ring):
        raise ScenarioError("CrossingMarkers", f"markers to {source} and {target} meet on {nu}",
                            (source, target, nu))
    gap = None
    for i, lo in enumerate(ring):
        hi = ring[(i + 1) % len(ring)]
        inside = [lo == hi or ccw_distance(lo, p) < ccw_distance(lo, hi) for p in src_pts]
        if all(inside):
            gap = (lo, hi)
            break
    if gap is None:
        raise ScenarioError("CrossingMarkers",
                            f"markers reaching {source} are separated by markers reaching {target} on {nu}",
                            (source, target, nu))
    end = gap[0] if side is Side.POSITIVE else gap[1]
    marks = sorted(m.mark_at(target) for m in by_pos[end])
    arc = Arc.open(gap[0], gap[1]) if gap[0] != gap[1] else Arc.point(gap[0])
    return CornerTurn(source, target, nu, arc, marks[0])


@dataclass(frozen=True)
class SpecialSection:
    name: str
    origins: tuple[tuple[str, str], ...]
    values: Mapping[str, str] = field(hash=False, compare=False)
    lifts: Mapping[str, Fraction] = field(hash=False, compare=False)

    def key(self):
        return tuple(sorted(self.values.items()))


def leftmost_extend(s: Scenario, leaf: str, mark: str, corners=None) -> SpecialSection:
    """The special section through ``mark`` on ``leaf``, with its lift."""
    space = s.space
    s.point(leaf, mark)
    corners = {} if corners is None else corners
    values = {leaf: mark}
    for target in space.leaves:
        if target in values:
            continue
        path = space.path_decompose(leaf, target)
        cur_leaf, cur_mark = leaf, mark
        for nxt, corner in zip(path.leaves[1:], path.corners):
            if corner:
                key = (cur_leaf, nxt)
                if key not in corners:
                    corners[key] = turn_corner(s, cur_leaf, nxt)
                cur_leaf, cur_mark = nxt, corners[key].mark
                continue
            route = space.hasse_path(cur_leaf, nxt)
            for a, b in zip(route, route[1:]):
                cur_mark, _ = _step(s, a, b, s.point(a, cur_mark))
            cur_leaf = nxt
        values[target] = cur_mark
    lifts = {leaf: s.point(leaf, mark).turn}
    stack = [leaf]
    while stack:
        a = stack.pop()
        for b in space.hasse_neighbours(a):
            if b not in lifts:
                lifts[b] = lifts[a] + _lift_step(s, a, b, s.point(a, values[a]), s.point(b, values[b]))
                stack.append(b)
    return SpecialSection(section_name(leaf, mark), ((leaf, mark),), values, lifts)


# --------------------------------------------------------------------------
# the result


@dataclass
class UniversalCircleResult:
    scenario: Scenario
    sections: tuple[SpecialSection, ...]
    corners: tuple[CornerTurn, ...] = ()
    _maps: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def leaves(self) -> tuple[str, ...]:
        return self.scenario.space.leaves

    @property
    def space(self) -> LeafSpace:
        return self.scenario.space

    @property
    def points(self):
        return self.scenario.circles

    @property
    def n(self) -> int:
        return len(self.sections)

    def position(self, i: int) -> CirclePoint:
        return CirclePoint(Fraction(i, self.n))

    def value(self, i: int, leaf: str) -> CirclePoint:
        if leaf not in self.points:
            raise UnknownLeaf(leaf)
        return self.points[leaf][self.sections[i].values[leaf]]

    def index(self, name: str) -> int:
        for i, sec in enumerate(self.sections):
            if sec.name == name:
                return i
        raise KeyError(name)

    def phi(self, leaf: str) -> MonotoneMap:
        """Structure map to the circle of ``leaf``; sections sit at ``i / n``."""
        if leaf not in self._maps:
            self._maps[leaf] = self._build_phi(leaf)
        return self._maps[leaf]

    def _build_phi(self, leaf: str) -> MonotoneMap:
        vals = [self.value(i, leaf) for i in range(self.n)]
        ys = [vals[0].turn]
        for a, b in zip(vals, vals[1:]):
            ys.append(ys[-1] + ccw_distance(a, b))
        xs = [Fraction(i, self.n) for i in range(self.n)]
        return MonotoneMap.from_lifted(xs, ys)

    def winding(self, leaf: str) -> Fraction:
        vals = [self.value(i, leaf) for i in range(self.n)]
        return sum((ccw_distance(vals[i], vals[(i + 1) % self.n]) for i in range(self.n)), Fraction(0))

    def sections_of(self, leaf: str) -> list[int]:
        return [i for i, sec in enumerate(self.sections) if any(o[0] == leaf for o in sec.origins)]

    def to_json(self):
        return {
            "scenario": self.scenario.to_json(),
            "sections": [{"name": sec.name,
                          "origins": [list(o) for o in sec.origins],
                          "values": {leaf: sec.values[leaf] for leaf in self.leaves},
                          "lifts": {leaf: format_rational(sec.lifts[leaf]) for leaf in self.leaves}}
                         for sec in self.sections],
            "corners": [{"from": c.source, "to": c.target, "via": c.via,
                         "gap": [str(c.gap.start), str(c.gap.end)], "mark": c.mark} for c in self.corners],
            "phi": {leaf: self.phi(leaf).to_json() for leaf in self.leaves},
        }

    @classmethod
    def from_json(cls, data) -> "UniversalCircleResult":
        scenario = Scenario.from_json(data["scenario"])
        sections = tuple(
            SpecialSection(sec["name"], tuple(tuple(o) for o in sec["origins"]), dict(sec["values"]),
                           {leaf: parse_rational(v) for leaf, v in sec["lifts"].items()})
            for sec in data["sections"])
        corners = tuple(CornerTurn(c["from"], c["to"], c["via"],
                                   Arc.open(c["gap"][0], c["gap"][1]) if c["gap"][0] != c["gap"][1]
                                   else Arc.point(c["gap"][0]), c["mark"])
                        for c in data.get("corners", []))
        return cls(scenario, sections, corners)


def _sort_key(sec: SpecialSection, order):
    return tuple(sec.lifts[leaf] for leaf in order) + (sec.name,)


def _rotate_canonical(sections: list[SpecialSection]) -> list[SpecialSection]:
    if not sections:
        return sections
    k = min(range(len(sections)), key=lambda i: sections[i].name)
    moved = [replace(sec, lifts={leaf: v + 1 for leaf, v in sec.lifts.items()}) for sec in sections[:k]]
    return sections[k:] + moved


def build_universal_circle(s: Scenario, root: str | None = None) -> UniversalCircleResult:
    """Sections for every mark, deduplicated and circularly ordered.

    ``root`` only chooses where lifts are normalized; any root yields the same
    circular order, which is then rotated to put the least section name first.
    """
    validate_scenario(s)
    space = s.space
    root = space.leaves[0] if root is None else root
    corners: dict = {}
    merged: dict = {}
    for leaf in space.leaves:
        for mark in s.marks(leaf):
            sec = leftmost_extend(s, leaf, mark, corners)
            shift = -(sec.lifts[root].numerator // sec.lifts[root].denominator)
            sec = replace(sec, lifts={k: v + shift for k, v in sec.lifts.items()})
            key = sec.key()
            if key in merged:
                old = merged[key]
                name = min(old.name, sec.name)
                keep = old if old.name == name else sec
                merged[key] = replace(keep, name=name, origins=tuple(sorted(old.origins + sec.origins)))
            else:
                merged[key] = sec
    order = [root] + [leaf for leaf in space.leaves if leaf != root]
    ordered = sorted(merged.values(), key=lambda sec: _sort_key(sec, order))
    ordered = _rotate_canonical(ordered)
    return UniversalCircleResult(s, tuple(ordered), tuple(corners[k] for k in sorted(corners)))


def section_block(r: UniversalCircleResult, leaf: str) -> list[int] | None:
    """Indices of the sections launched from ``leaf`` as one ccw run, or None.

    The run starts at its clockwisemost member.  None means the sections
    of ``leaf`` are not circularly contiguous.
    """
    own = set(r.sections_of(leaf))
    if not own:
        return []
    if len(own) == r.n:
        return list(range(r.n))
    starts = [i for i in sorted(own) if (i - 1) % r.n not in own]
    if len(starts) != 1:
        return None
    run, i = [], starts[0]
    while i in own:
        run.append(i)
        i = (i + 1) % r.n
    return run


def blocks_adjacent(r: UniversalCircleResult, first: str, second: str) -> bool:
    """True iff the blocks of ``first`` then ``second`` are disjoint ccw neighbours."""
    a, b = section_block(r, first), section_block(r, second)
    if not a or not b or set(a) & set(b):
        return False
    return (a[-1] + 1) % r.n == b[0]


def ccw_run(r: UniversalCircleResult, first: int, last: int) -> list[int]:
    """Indices met going counterclockwise from ``first`` to ``last`` inclusive."""
    return [(first + k) % r.n for k in range((last - first) % r.n + 1)]


def circular_names(r: UniversalCircleResult) -> tuple[str, ...]:
    return tuple(sec.name for sec in r.sections)


def same_circular_order(first: UniversalCircleResult, second: UniversalCircleResult) -> bool:
    a, b = circular_names(first), circular_names(second)
    if len(a) != len(b):
        return False
    return any(a == b[k:] + b[:k] for k in range(len(b))) or not a


def corpus_names() -> list[str]:
    """Names of the scenarios shipped with the package."""
    root = resources.files("laminary") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_corpus(name: str) -> Scenario:
    text = (resources.files("laminary") / "corpus" / f"{name}.json").read_text(encoding="utf-8")
    return Scenario.from_json(json.loads(text))


# --------------------------------------------------------------------------
# verification


@dataclass
class AxiomReport:
    monotone: list = field(default_factory=list)
    gap_condition: list = field(default_factory=list)
    equivariance: list = field(default_factory=list)
    faithfulness: list = field(default_factory=list)
    noncrossing: list = field(default_factory=list)
    density: list = field(default_factory=list)
    generators_checked: int = 0
    pairs_checked: int = 0

    @property
    def axiom1(self) -> str:
        if not self.generators_checked:
            return "not applicable"
        return "pass" if not self.faithfulness else "fail"

    @property
    def ok(self) -> bool:
        return not (self.monotone or self.gap_condition or self.equivariance or self.faithfulness
                    or self.noncrossing or self.density)

    def summary(self) -> dict:
        return {
            "axiom1_faithful": self.axiom1,
            "axiom2_monotone": "pass" if not self.monotone else "fail",
            "axiom3_equivariant": ("not applicable" if not self.generators_checked
                                   else "pass" if not self.equivariance else "fail"),
            "axiom4_gap": "pass" if not self.gap_condition else "fail",
            "noncrossing": "pass" if not self.noncrossing else "fail",
            "sections_dense_in_core": "pass" if not self.density else "fail",
        }


def _core_indices(r: UniversalCircleResult, leaf: str) -> CoreSet:
    return r.phi(leaf).core()


def induced_permutation(r: UniversalCircleResult, g: Generator):
    """Section index -> image section index, or None where no image exists.

    Partial generators have no induced permutation; the whole result is None.
    """
    if not r.space.is_total(g.leaf_map):
        return None
    table = {sec.key(): i for i, sec in enumerate(r.sections)}
    perm = []
    for sec in r.sections:
        image = {}
        for leaf, mark in sec.values.items():
            new_leaf, new_mark = g.image(leaf, mark)
            image[new_leaf] = new_mark
        perm.append(table.get(tuple(sorted(image.items()))))
    return perm


def verify_axioms(r: UniversalCircleResult) -> AxiomReport:
    rep = AxiomReport()
    s = r.scenario
    n = r.n
    for leaf in r.leaves:
        w = r.winding(leaf)
        if w != 1:
            rep.monotone.append((leaf, f"structure map winds {w} times"))
    for i in range(n):
        for j in range(i + 1, n):
            a, b = r.sections[i].lifts, r.sections[j].lifts
            for leaf in r.leaves:
                if not (a[leaf] <= b[leaf] <= a[leaf] + 1):
                    rep.noncrossing.append((r.sections[i].name, r.sections[j].name, leaf))
                    break
    if rep.monotone:
        return rep
    phis = {leaf: r.phi(leaf) for leaf in r.leaves}
    cores = {leaf: phis[leaf].core() for leaf in r.leaves}
    space = s.space
    for i, lam in enumerate(r.leaves):
        for mu in r.leaves[i + 1:]:
            if space.comparable(lam, mu):
                continue
            rep.pairs_checked += 1
            for a, b in ((lam, mu), (mu, lam)):
                if containing_gap(cores[a], phis[b]) is None:
                    rep.gap_condition.append((a, b))
    for leaf in r.leaves:
        own = r.sections_of(leaf)
        vals = [r.value(i, leaf) for i in own]
        if len(set(vals)) != len(vals):
            rep.density.append((leaf, "structure map is not injective on the sections it launched"))
        for gap in phis[leaf].gaps():
            inside = [i for i in own if _open_arc_contains(gap, r.position(i))]
            if len(inside) > 1:
                rep.density.append((leaf, f"gap {gap!r} holds {len(inside)} of its sections"))
        realized = set(vals)
        for i in range(n):
            if cores[leaf].contains(r.position(i)) and r.value(i, leaf) not in realized:
                rep.density.append((leaf, f"core section {r.sections[i].name} has an unrealized value"))
    for g in s.generators:
        rep.generators_checked += 1
        _check_generator(r, s, g, rep)
    return rep


def _open_arc_contains(arc: Arc, p: CirclePoint) -> bool:
    return p != arc.start and p != arc.end and ccw_distance(arc.start, p) < arc.length


def _closed_arc_contains(arc: Arc, p: CirclePoint) -> bool:
    return p == arc.start or p == arc.end or ccw_distance(arc.start, p) < arc.length


def _check_generator(r, s, g: Generator, rep: AxiomReport) -> None:
    n = r.n
    if not s.space.is_total(g.leaf_map):
        dom = set(g.leaf_map.mapping)
        for sec in r.sections:
            image = {g.leaf_map(leaf): g.mark_maps[leaf][mark] for leaf, mark in sec.values.items()
                     if leaf in dom}
            if not any(all(t.values[k] == v for k, v in image.items()) for t in r.sections):
                rep.equivariance.append((g.name, sec.name, "no section matches the image on the window"))
        return
    perm = induced_permutation(r, g)
    if any(p is None for p in perm):
        missing = [r.sections[i].name for i, p in enumerate(perm) if p is None]
        rep.equivariance.append((g.name, missing[0], "image is not a section"))
        return
    if sorted(perm) != list(range(n)):
        rep.equivariance.append((g.name, None, "induced map is not a bijection"))
        return
    shift = (perm[0] - 0) % n
    if any((perm[i] - i) % n != shift for i in range(n)):
        rep.equivariance.append((g.name, None, "induced map does not preserve the circular order"))
    for i in range(n):
        for leaf in r.leaves:
            lhs = r.value(perm[i], g.leaf_map(leaf))
            rhs = s.point(g.leaf_map(leaf), g.mark_maps[leaf][r.sections[i].values[leaf]])
            if lhs != rhs:
                rep.equivariance.append((g.name, r.sections[i].name, f"diagram fails at {leaf}"))
                return
    identity_data = all(g.leaf_map(leaf) == leaf for leaf in r.leaves) and all(
        all(k == v for k, v in mm.items()) for mm in g.mark_maps.values())
    if perm == list(range(n)) and not identity_data:
        rep.faithfulness.append((g.name, "acts trivially on the universal circle"))


# --------------------------------------------------------------------------
# minimality


@dataclass
class Reduction:
    result: UniversalCircleResult
    collapse: dict
    correspondence: MonotoneMap


def distinguishing_leaf(r: UniversalCircleResult, i: int, j: int) -> str | None:
    for leaf in r.leaves:
        if r.sections[i].values[leaf] != r.sections[j].values[leaf]:
            return leaf
    return None


def is_minimal(r: UniversalCircleResult) -> bool:
    keys = [sec.key() for sec in r.sections]
    return len(set(keys)) == len(keys)


def minimal_reduce(r: UniversalCircleResult) -> Reduction:
    """Identify sections that agree on every leaf.

    ``collapse`` sends old indices to new ones and ``correspondence`` is the
    monotone map between the two finite circles (positions ``i / n``).
    """
    first: dict = {}
    groups: list[list[int]] = []
    for i, sec in enumerate(r.sections):
        key = sec.key()
        if key in first:
            groups[first[key]].append(i)
        else:
            first[key] = len(groups)
            groups.append([i])
    reduced = []
    for members in groups:
        secs = [r.sections[i] for i in members]
        best = min(secs, key=lambda x: x.name)
        origins = tuple(sorted({o for x in secs for o in x.origins}))
        reduced.append(replace(best, origins=origins))
    rotated = _rotate_canonical(reduced)
    names = [sec.name for sec in rotated]
    collapse = {}
    for g, members in enumerate(groups):
        new = names.index(reduced[g].name)
        for i in members:
            collapse[i] = new
    m = len(rotated)
    ys = []
    turns = 0
    for i in range(r.n):
        j = collapse[i]
        if ys and Fraction(j, m) + turns < ys[-1]:
            turns += 1
        ys.append(Fraction(j, m) + turns)
    base = ys[0].numerator // ys[0].denominator
    corr = MonotoneMap.from_lifted([Fraction(i, r.n) for i in range(r.n)], [y - base for y in ys])
    out = UniversalCircleResult(r.scenario, tuple(rotated), r.corners)
    return Reduction(out, collapse, corr)


def with_duplicates(r: UniversalCircleResult, index: int, copies: int) -> UniversalCircleResult:
    """A deliberately non-minimal result: ``copies`` extra clones of one section."""
    sec = r.sections[index]
    clones = [replace(sec, name=f"{sec.name}#{k}") for k in range(1, copies + 1)]
    sections = list(r.sections[:index + 1]) + clones + list(r.sections[index + 1:])
    return UniversalCircleResult(r.scenario, tuple(sections), r.corners)
