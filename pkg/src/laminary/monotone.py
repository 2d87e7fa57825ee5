"""Degree-one monotone circle maps, their gaps and cores, and lamination transport.

Maps are piecewise linear in turn coordinates.  Internally a map is stored by a
*lift*: breakpoints ``x_0 < ... < x_{n-1}`` in [0, 1) with lifted values
``y_0 <= ... <= y_{n-1} <= y_0 + 1`` and ``y_0`` in [0, 1); the closing segment
runs from ``(x_{n-1}, y_{n-1})`` to ``(x_0 + 1, y_0 + 1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .circle import Arc, CirclePoint, PointPair, format_rational, parse_rational, pt
from .errors import (DuplicateX, EmptySelection, HypothesisViolated, InvariantViolation,
                     NotMonotone)
from .laminations import (Crossing, Lamination, boundary_hull, lamination_to_relation,
                          make_lamination)

ONE = Fraction(1)


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


# --------------------------------------------------------------------------
# closed subsets of the circle: finite unions of closed arcs and points


def _arc_intervals(arc: Arc) -> list[tuple[Fraction, Fraction]]:
    a, b = arc.start.turn, arc.end.turn
    if arc.is_point:
        return [(a, a)]
    if a < b:
        return [(a, b)]
    return [(a, ONE), (Fraction(0), b)]


@dataclass(frozen=True)
class CoreSet:
    """Closed subset of the circle: disjoint closed arcs and isolated points.

    ``full`` marks the whole circle, in which case ``arcs`` is empty.
    """

    arcs: tuple[Arc, ...] = ()
    full: bool = False

    @classmethod
    def whole(cls) -> "CoreSet":
        return cls((), True)

    @classmethod
    def from_arcs(cls, arcs: Iterable[Arc]) -> "CoreSet":
        ivs = []
        for arc in arcs:
            ivs.extend(_arc_intervals(arc.closure()))
        return cls._from_intervals(ivs)

    @classmethod
    def from_points(cls, points: Iterable) -> "CoreSet":
        return cls.from_arcs(Arc.point(p) for p in points)

    @classmethod
    def _from_intervals(cls, ivs) -> "CoreSet":
        ivs = sorted(ivs)
        merged: list[list[Fraction]] = []
        for lo, hi in ivs:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        if not merged:
            return cls()
        if merged[0][0] == 0 and merged[-1][1] == 1:
            if len(merged) == 1:
                return cls.whole()
            first = merged.pop(0)
            merged[-1][1] = first[1]
        elif merged[-1][1] == 1:
            # an interval ending at 1 ends at the point 0
            merged[-1][1] = Fraction(0)
        arcs = []
        for lo, hi in merged:
            if lo == hi or (hi == 0 and lo == 1):
                arcs.append(Arc.point(lo))
            else:
                arcs.append(Arc.closed(lo, hi))
        arcs.sort(key=lambda arc: arc.start)
        return cls(tuple(arcs))

    def _intervals(self):
        if self.full:
            return [(Fraction(0), ONE)]
        out = []
        for arc in self.arcs:
            out.extend(_arc_intervals(arc))
        return out

    def __bool__(self):
        return self.full or bool(self.arcs)

    def __repr__(self) -> str:
        if self.full:
            return "CoreSet(circle)"
        return "CoreSet(" + ", ".join(repr(a) for a in self.arcs) + ")"

    def union(self, *others: "CoreSet") -> "CoreSet":
        ivs = list(self._intervals())
        for other in others:
            ivs.extend(other._intervals())
        return CoreSet._from_intervals(ivs)

    def issubset(self, other: "CoreSet") -> bool:
        return other.union(self) == other

    def contains(self, p) -> bool:
        x = pt(p).turn
        return self.full or any(lo <= x <= hi for lo, hi in self._intervals())

    def complement(self) -> list[Arc]:
        """Open complementary arcs, in counterclockwise order.

        The complement of a single point is the punctured circle, which is not
        an arc; it is reported as empty, like the complement of the circle.
        """
        if self.full or not self.arcs:
            return []
        if len(self.arcs) == 1 and self.arcs[0].is_point:
            return []
        out = []
        n = len(self.arcs)
        for i in range(n):
            a, b = self.arcs[i], self.arcs[(i + 1) % n]
            out.append(Arc.open(a.end, b.start))
        return out

    def boundary_points(self) -> list[CirclePoint]:
        return sorted({p for arc in self.arcs for p in (arc.start, arc.end)})

    def has_two_points(self) -> bool:
        return self.full or len(self.arcs) > 1 or (bool(self.arcs) and not self.arcs[0].is_point)

    def neighborhood(self, eps: Fraction) -> "CoreSet":
        if self.full:
            return self
        if eps >= Fraction(1, 2):
            return CoreSet.whole()
        grown = []
        for arc in self.arcs:
            if arc.length + 2 * eps >= 1:
                return CoreSet.whole()
            grown.append(Arc.closed(arc.start - eps, arc.end + eps))
        return CoreSet.from_arcs(grown)

    def meets(self, other: "CoreSet") -> bool:
        for lo, hi in self._intervals():
            for lo2, hi2 in other._intervals():
                if lo <= hi2 and lo2 <= hi:
                    return True
        return False

    def to_json(self):
        if self.full:
            return "circle"
        return [[str(a.start), str(a.end)] for a in self.arcs]


def hull_boundary(core: CoreSet) -> Lamination:
    """Boundary geodesics of the convex hull of a closed set, as chords.

    One chord spans each complementary arc; for a finite point set this is the
    polygon of :func:`boundary_hull`.
    """
    leaves = set()
    for gap in core.complement():
        if gap.start != gap.end:
            leaves.add(PointPair(gap.start, gap.end))
    return make_lamination(leaves)


def cores_unlinked(first: CoreSet, second: CoreSet) -> bool:
    """True iff no pair of points of ``first`` links a disjoint pair of ``second``."""
    if not first.has_two_points() or not second.has_two_points():
        return True
    for a, b in ((first, second), (second, first)):
        if any(a.issubset(CoreSet.from_arcs([g.closure()])) for g in b.complement()):
            return True
    return False


# --------------------------------------------------------------------------
# monotone maps


@dataclass(frozen=True)
class MonotoneMap:
    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    # ----- construction

    @classmethod
    def identity(cls) -> "MonotoneMap":
        return cls((Fraction(0),), (Fraction(0),))

    @classmethod
    def from_lifted(cls, xs: Sequence, ys: Sequence) -> "MonotoneMap":
        xs = [parse_rational(x) for x in xs]
        ys = [parse_rational(y) for y in ys]
        if not xs or len(xs) != len(ys):
            raise NotMonotone("need a nonempty, equal number of x and y values")
        if len(set(xs)) != len(xs):
            raise DuplicateX(f"repeated breakpoint abscissa in {list(map(str, xs))}")
        if any(not 0 <= x < 1 for x in xs) or any(b <= a for a, b in zip(xs, xs[1:])):
            raise NotMonotone("breakpoint abscissae must increase within [0, 1)")
        if any(b < a for a, b in zip(ys, ys[1:])) or ys[-1] > ys[0] + 1:
            raise NotMonotone("lifted values decrease or wind more than once")
        shift = _floor(ys[0])
        return cls._normalized(xs, [y - shift for y in ys])

    @classmethod
    def _normalized(cls, xs: list, ys: list) -> "MonotoneMap":
        drop = {i for i in range(len(xs)) if len(xs) > 1 and _removable(xs, ys, i)}
        if len(drop) == len(xs):
            drop.discard(0)
        xs = [x for i, x in enumerate(xs) if i not in drop]
        ys = [y for i, y in enumerate(ys) if i not in drop]
        if len(xs) == 1:
            # a single breakpoint is a rotation y = x + c; anchor it at x = 0
            c = ys[0] - xs[0]
            xs, ys = [Fraction(0)], [c]
        shift = _floor(ys[0])
        return cls(tuple(xs), tuple(y - shift for y in ys))

    # ----- lifted evaluation

    def _segment(self, i: int):
        n = len(self.xs)
        x0, y0 = self.xs[i], self.ys[i]
        if i + 1 < n:
            return x0, y0, self.xs[i + 1], self.ys[i + 1]
        return x0, y0, self.xs[0] + 1, self.ys[0] + 1

    def segments(self):
        return [self._segment(i) for i in range(len(self.xs))]

    def lift(self, t: Fraction) -> Fraction:
        """Value of the lift at a real (rational) argument."""
        t = parse_rational(t)
        n = _floor(t - self.xs[0])
        s = t - n
        for x0, y0, x1, y1 in self.segments():
            if x0 <= s < x1:
                return y0 + (s - x0) * (y1 - y0) / (x1 - x0) + n
        raise InvariantViolation(f"no segment covers {s}")  # pragma: no cover

    def __call__(self, p) -> CirclePoint:
        return CirclePoint(self.lift(pt(p).turn))

    # ----- structure

    def gaps(self) -> list[Arc]:
        return [Arc.open(x0, x1) for x0, y0, x1, y1 in self.segments() if y0 == y1]

    def core(self) -> CoreSet:
        arcs = [Arc.closed(x0, x1) for x0, y0, x1, y1 in self.segments() if y1 > y0]
        if len(arcs) == len(self.xs):
            return CoreSet.whole()
        return CoreSet.from_arcs(arcs)

    def preimage(self, p) -> Arc:
        """The (connected) preimage of a point: a closed arc or a single point."""
        y = pt(p).turn
        for x0, y0, x1, y1 in self.segments():
            if y0 == y1:
                if CirclePoint(y0) == CirclePoint(y):
                    return Arc.closed(x0, x1)
                continue
            k = math.ceil(y0 - y)
            if y + k < y1:
                return Arc.point(x0 + (y + k - y0) * (x1 - x0) / (y1 - y0))
        raise InvariantViolation(f"{y} has empty preimage")  # pragma: no cover

    def breakpoints(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.xs, self.ys))

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x), format_rational(y)] for x, y in zip(self.xs, self.ys)]

    @classmethod
    def from_json(cls, data) -> "MonotoneMap":
        # to_json writes lifted values, which the circle-point reading of
        # make_monotone would misread when one segment carries the whole turn
        return cls.from_lifted([a for a, _ in data], [b for _, b in data])

    def __repr__(self) -> str:
        inner = ", ".join(f"({format_rational(x)},{format_rational(y)})" for x, y in zip(self.xs, self.ys))
        return f"MonotoneMap[{inner}]"


def _slope(x0, y0, x1, y1) -> Fraction:
    return (y1 - y0) / (x1 - x0)


def _removable(xs, ys, i) -> bool:
    n = len(xs)
    px, py = (xs[i - 1], ys[i - 1]) if i > 0 else (xs[-1] - 1, ys[-1] - 1)
    nx, ny = (xs[i + 1], ys[i + 1]) if i + 1 < n else (xs[0] + 1, ys[0] + 1)
    return _slope(px, py, xs[i], ys[i]) == _slope(xs[i], ys[i], nx, ny)


def make_monotone(breakpoints: Iterable) -> MonotoneMap:
    """Validated, normalized map from ``(x, y)`` breakpoints.

    If every ``y`` lies in [0, 1) the values are read as circle points and the
    winding between consecutive breakpoints is the counterclockwise distance;
    otherwise they are read as an explicit lift.
    """
    pairs = [(parse_rational(x), parse_rational(y)) for x, y in breakpoints]
    if not pairs:
        raise NotMonotone("a monotone map needs at least one breakpoint")
    xs_mod = [x - _floor(x) for x, _ in pairs]
    if len(set(xs_mod)) != len(xs_mod):
        raise DuplicateX("two breakpoints share an abscissa")
    if all(0 <= y < 1 for _, y in pairs):
        order = sorted(range(len(pairs)), key=lambda i: xs_mod[i])
        xs = [xs_mod[i] for i in order]
        raw = [pairs[i][1] for i in order]
        ys = [raw[0]]
        for a, b in zip(raw, raw[1:]):
            ys.append(ys[-1] + ((b - a) % 1))
        total = ys[-1] + ((raw[0] - raw[-1]) % 1) - ys[0]
        if len(pairs) == 1:
            total = ONE
        if total != 1:
            raise NotMonotone(f"values wind {total} times around the target circle")
        return MonotoneMap._normalized(xs, ys)
    return MonotoneMap.from_lifted([x for x, _ in pairs], [y for _, y in pairs])


def compose(outer: MonotoneMap, inner: MonotoneMap) -> MonotoneMap:
    """``outer o inner``, computed exactly on the union of induced breakpoints."""
    candidates = set(inner.xs)
    for x in outer.xs:
        arc = inner.preimage(x)
        candidates.add(arc.start.turn)
        candidates.add(arc.end.turn)
    xs = sorted(candidates)
    ys = [outer.lift(inner.lift(x)) for x in xs]
    shift = _floor(ys[0])
    return MonotoneMap._normalized(xs, [y - shift for y in ys])


def pushforward(m: MonotoneMap, lam: Lamination) -> Lamination:
    """Image lamination; leaves collapsed onto the diagonal are dropped."""
    leaves = set()
    for c in lam:
        a, b = m(c.a), m(c.b)
        if a != b:
            leaves.add(PointPair(a, b))
    try:
        return make_lamination(leaves)
    except Crossing as exc:  # pragma: no cover - would contradict monotonicity
        raise InvariantViolation(f"pushforward produced crossing leaves: {exc}") from exc


def pullback(m: MonotoneMap, lam: Lamination) -> Lamination:
    """Hull boundaries of the preimages of the classes of ``lam``.

    Gap images are identified points of the target, so the pullback of the
    empty lamination already contains one chord per gap.
    """
    classes = [set(c) for c in lamination_to_relation(lam).classes]
    covered = set().union(*classes) if classes else set()
    for gap in m.gaps():
        y = m(gap.start)
        if y not in covered:
            classes.append({y})
            covered.add(y)
    leaves = set()
    for cls in classes:
        pre = CoreSet.from_arcs(m.preimage(y) for y in cls)
        leaves.update(hull_boundary(pre).leaves)
    return make_lamination(leaves)


# --------------------------------------------------------------------------
# the Devil's staircase on triadic rationals


@dataclass(frozen=True)
class TriadicRational:
    """``0.d1 d2 ... dk`` in base 3."""

    digits: str = ""

    def __post_init__(self):
        if any(d not in "012" for d in self.digits):
            raise ValueError(f"not a base-3 digit string: {self.digits!r}")

    @property
    def value(self) -> Fraction:
        return sum((Fraction(int(d), 3 ** (j + 1)) for j, d in enumerate(self.digits)), Fraction(0))

    @classmethod
    def from_fraction(cls, q) -> "TriadicRational":
        q = parse_rational(q)
        digits = []
        while q:
            if len(digits) > 64 or q.denominator % 3 and q.denominator != 1:
                raise ValueError(f"{q} has no finite base-3 expansion")
            q *= 3
            d = _floor(q)
            digits.append(str(d))
            q -= d
        return cls("".join(digits))


def devil_eval(t: TriadicRational) -> CirclePoint:
    """Cantor function on a triadic rational, read as a circle point."""
    s = Fraction(0)
    for j, d in enumerate(t.digits, start=1):
        if d != "0":
            s += Fraction(1, 2 ** j)
        if d == "1":
            break
    return CirclePoint(s)


def _base3_digits(q: Fraction):
    """Digits of the standard base-3 expansion; yields (prefix, cycle) lists."""
    seen: dict[Fraction, int] = {}
    digits = []
    while q and q not in seen:
        seen[q] = len(digits)
        q *= 3
        d = _floor(q)
        digits.append(d)
        q -= d
    if not q:
        return digits, []
    start = seen[q]
    return digits[:start], digits[start:]


def devil_core_member(t) -> bool:
    """Membership in the middle-thirds Cantor set.

    Accepts a :class:`TriadicRational` or any rational in [0, 1].  A number is a
    member iff some base-3 expansion avoids the digit 1; terminating expansions
    ending in 1 also have the form ...0222...
    """
    q = t.value if isinstance(t, TriadicRational) else parse_rational(t)
    if not 0 <= q <= 1:
        raise ValueError("Cantor membership is defined on [0, 1]")
    if q == 1:
        return True
    prefix, cycle = _base3_digits(q)
    if cycle:
        return 1 not in prefix and 1 not in cycle
    while prefix and prefix[-1] == 0:
        prefix.pop()
    if prefix and prefix[-1] == 1:
        prefix = prefix[:-1]
    return 1 not in prefix


def devil_gaps(level: int) -> list[Arc]:
    """Open middle-third gaps removed in the first ``level`` stages."""
    gaps = []
    intervals = [(Fraction(0), ONE)]
    for _ in range(level):
        nxt = []
        for lo, hi in intervals:
            third = (hi - lo) / 3
            gaps.append(Arc.open(lo + third, lo + 2 * third))
            nxt += [(lo, lo + third), (lo + 2 * third, hi)]
        intervals = nxt
    return sorted(gaps, key=lambda g: g.start)


# --------------------------------------------------------------------------
# monotone families over a finite graph


@dataclass(frozen=True)
class MonotoneFamily:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    maps: Mapping[str, MonotoneMap] = field(hash=False)

    def __post_init__(self):
        missing = [v for v in self.vertices if v not in self.maps]
        if missing:
            raise ValueError(f"no map for vertices {missing}")
        for a, b in self.edges:
            if a not in self.vertices or b not in self.vertices:
                raise ValueError(f"edge {(a, b)} leaves the vertex set")
        if not _connected(self.vertices, self.edges, self.vertices):
            raise ValueError("the base graph of a monotone family must be connected")

    def neighbours(self, v):
        for a, b in self.edges:
            if a == v:
                yield b
            elif b == v:
                yield a

    def to_json(self):
        return {"graph": {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]},
                "maps": {v: self.maps[v].to_json() for v in self.vertices}}

    @classmethod
    def from_json(cls, data) -> "MonotoneFamily":
        graph = data["graph"]
        return cls(tuple(graph["vertices"]), tuple(tuple(e) for e in graph["edges"]),
                   {v: MonotoneMap.from_json(m) for v, m in data["maps"].items()})


def _connected(vertices, edges, subset) -> bool:
    subset = list(subset)
    if not subset:
        return False
    allowed = set(subset)
    seen = {subset[0]}
    stack = [subset[0]]
    while stack:
        v = stack.pop()
        for a, b in edges:
            for u, w in ((a, b), (b, a)):
                if u == v and w in allowed and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return seen == allowed


def core_union(fam: MonotoneFamily, selection: Iterable[str]) -> CoreSet:
    chosen = list(dict.fromkeys(selection))
    if not chosen:
        raise EmptySelection("core_union needs at least one vertex")
    cores = [fam.maps[v].core() for v in chosen]
    return cores[0].union(*cores[1:])


def containing_gap(core: CoreSet, m: MonotoneMap):
    """The gap of ``m`` whose closure contains ``core``, or None."""
    for gap in m.gaps():
        if core.issubset(CoreSet.from_arcs([gap.closure()])):
            return gap
    return None


@dataclass
class UnlinkedExtensionReport:
    confirmed: bool
    labels: dict = field(default_factory=dict)
    label_jumps: list = field(default_factory=list)
    conclusion_unlinked: bool = True
    core_x: CoreSet | None = None
    core_y: CoreSet | None = None

    @property
    def status(self) -> str:
        if self.label_jumps:
            return "LabelJump"
        return "Confirmed" if self.confirmed else "Counterexample"


def unlinked_extension_check(fam: MonotoneFamily, xset: Iterable[str],
                             yset: Iterable[str]) -> UnlinkedExtensionReport:
    """Check that pairwise unlinked cores give unlinked unions, on finite data.

    ``labels[(y, x)]`` is the gap of the map at ``y`` whose closure holds the
    core at ``x`` (and symmetrically).  On a finite base nothing forces the
    label to stay constant along an edge; a jump is reported as ``LabelJump``
    because the argument for unlinked unions needs that continuity.
    """
    xs, ys = list(dict.fromkeys(xset)), list(dict.fromkeys(yset))
    for name, sel in (("X", xs), ("Y", ys)):
        if not sel:
            raise EmptySelection(f"{name} is empty")
        if not _connected(fam.vertices, fam.edges, sel):
            raise ValueError(f"{name} does not induce a connected subgraph")
    labels = {}
    for x in xs:
        for y in ys:
            for a, b in ((x, y), (y, x)):
                gap = containing_gap(fam.maps[a].core(), fam.maps[b])
                if gap is None:
                    raise HypothesisViolated(x, y, f"core at {a} is not inside one gap at {b}")
                labels[(b, a)] = gap
    jumps = []
    for group, others in ((xs, ys), (ys, xs)):
        inside = set(group)
        for u, v in fam.edges:
            if u in inside and v in inside:
                for w in others:
                    if labels[(w, u)] != labels[(w, v)]:
                        jumps.append((w, u, v))
    cx, cy = core_union(fam, xs), core_union(fam, ys)
    unlinked = cores_unlinked(cx, cy)
    return UnlinkedExtensionReport(confirmed=unlinked and not jumps, labels=labels,
                                   label_jumps=jumps, conclusion_unlinked=unlinked,
                                   core_x=cx, core_y=cy)


def semicontinuity_warnings(fam: MonotoneFamily, eps: Fraction = Fraction(1, 100)) -> list[str]:
    """Edges along which a core arc of one end is far from the other end's core."""
    warnings = []
    for u, v in fam.edges:
        for a, b in ((u, v), (v, u)):
            near = fam.maps[b].core().neighborhood(eps)
            core_a = fam.maps[a].core()
            pieces = [CoreSet.whole()] if core_a.full else [CoreSet.from_arcs([arc]) for arc in core_a.arcs]
            for piece in pieces:
                if not piece.meets(near):
                    warnings.append(f"core piece {piece!r} of {a} is farther than "
                                    f"{format_rational(eps)} from the core of {b}")
    return warnings
