"""Invariant laminations of a universal circle, fans and the alternative flag.

Everything lives in section-position coordinates: section ``i`` of a result
with ``n`` sections sits at turn ``i/n``.  Cores of the structure maps are
unions of closed arcs there, so side cores are :class:`CoreSet` values and
their hull boundaries have section positions as endpoints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .circle import CirclePoint, PointPair
from .errors import Crossing, EmptySide, InvariantViolation, NoGenerators, NotMinimal, UnknownLeaf
from .laminations import Lamination, make_lamination
from .leafspace import Branching, Side
from .monotone import CoreSet, hull_boundary, pushforward
from .universal import UniversalCircleResult, induced_permutation, is_minimal


@dataclass(frozen=True)
class SideCore:
    leaf: str
    sign: Side
    core: CoreSet
    contributors: tuple[str, ...]

    @property
    def points(self) -> list[CirclePoint]:
        return self.core.boundary_points()


def leaves_on_side(r: UniversalCircleResult, leaf: str, sign: Side) -> list[str]:
    space = r.space
    return [mu for mu in r.leaves if mu != leaf and space.positive_side(leaf, mu) is sign]


def side_core(r: UniversalCircleResult, leaf: str, sign) -> SideCore:
    sign = Side.parse(sign)
    if leaf not in r.leaves:
        raise UnknownLeaf(leaf)
    others = leaves_on_side(r, leaf, sign)
    if not others:
        raise EmptySide(f"no leaf lies on the {sign.value} side of {leaf}")
    core = CoreSet.from_arcs([])
    for mu in others:
        core = core.union(r.phi(mu).core())
    return SideCore(leaf, sign, core, tuple(others))


def lambda_side(r: UniversalCircleResult, leaf: str, sign) -> Lamination:
    return hull_boundary(side_core(r, leaf, sign).core)


def _lambda_side_or_empty(r, leaf, sign) -> Lamination:
    try:
        return lambda_side(r, leaf, sign)
    except EmptySide:
        return Lamination()


@dataclass(frozen=True)
class UnivLaminationPair:
    plus: Lamination
    minus: Lamination
    per_leaf: dict = field(default_factory=dict, compare=False)

    def get(self, sign) -> Lamination:
        return self.plus if Side.parse(sign) is Side.POSITIVE else self.minus


def expected_nonempty(r: UniversalCircleResult) -> set[Side]:
    """Signs whose union lamination is forced to be nonempty.

    A sign is forced when two leaves each lie on the opposite side of the
    other and both still have leaves on that sign's side; their side cores
    are then unlinked and neither covers the circle.
    """
    space = r.space
    forced = set()
    for sign in Side:
        for i, lam in enumerate(r.leaves):
            if not leaves_on_side(r, lam, sign):
                continue
            for mu in r.leaves[i + 1:]:
                if (space.positive_side(lam, mu) is sign.flipped()
                        and space.positive_side(mu, lam) is sign.flipped()
                        and leaves_on_side(r, mu, sign)):
                    forced.add(sign)
                    break
            if sign in forced:
                break
    return forced


def univ_laminations(r: UniversalCircleResult) -> UnivLaminationPair:
    """Union over leaves of the side laminations, for both signs.

    The result must be minimal.  Linked leaves in the union, or an empty
    lamination on a side where the leaf space branches, contradict the
    construction and raise :class:`InvariantViolation`; see
    :func:`expected_nonempty` for when a side must be nonempty.
    """
    if not is_minimal(r):
        raise NotMinimal("result has sections no leaf distinguishes; run minimal_reduce first")
    per_leaf = {}
    union = {Side.POSITIVE: set(), Side.NEGATIVE: set()}
    for leaf in r.leaves:
        for sign in Side:
            lam = _lambda_side_or_empty(r, leaf, sign)
            per_leaf[(leaf, sign)] = lam
            union[sign].update(lam.leaves)
    out = {}
    for sign, leaves in union.items():
        try:
            out[sign] = make_lamination(leaves)
        except Crossing as exc:
            raise InvariantViolation(f"{sign.value} union is not a lamination: {exc}") from exc
    for sign in expected_nonempty(r):
        if not out[sign]:
            raise InvariantViolation(f"{sign.value} lamination is empty although two leaves branch that way")
    return UnivLaminationPair(out[Side.POSITIVE], out[Side.NEGATIVE], per_leaf)


def position_index(r: UniversalCircleResult, p: CirclePoint) -> int:
    i = p.turn * r.n
    if i.denominator != 1:
        raise InvariantViolation(f"{p} is not a section position")
    return int(i)


def lamination_names(r: UniversalCircleResult, lam: Lamination) -> list[list[str]]:
    """Chords as pairs of section names."""
    return [[r.sections[position_index(r, c.a)].name, r.sections[position_index(r, c.b)].name]
            for c in lam]


def permute_lamination(r: UniversalCircleResult, perm: list[int], lam: Lamination) -> Lamination:
    moved = set()
    for c in lam:
        a, b = (r.position(perm[position_index(r, p)]) for p in c)
        moved.add(PointPair(a, b))
    return Lamination(tuple(sorted(moved)))


def generator_invariance(r: UniversalCircleResult, pair: UnivLaminationPair) -> list[tuple[str, str]]:
    """(generator, sign) pairs whose induced permutation moves a lamination."""
    bad = []
    for g in r.scenario.generators:
        perm = induced_permutation(r, g)
        if perm is None or None in perm:
            continue
        for sign in Side:
            lam = pair.get(sign)
            if permute_lamination(r, perm, lam) != lam:
                bad.append((g.name, sign.value))
    return bad


@dataclass(frozen=True)
class TrivialMapReport:
    leaf: str
    target: str
    sign: Side
    image: Lamination
    required_empty: bool

    @property
    def violation(self) -> bool:
        return self.required_empty and bool(self.image)


def check_trivial_map(r: UniversalCircleResult, leaf: str, target: str, sign=Side.POSITIVE,
                      lam: Lamination | None = None) -> TrivialMapReport:
    """Push a side lamination of ``leaf`` to ``target``'s circle.

    The image must be empty when ``target`` lies on either side of
    ``leaf`` without being below it (above it, for the negative side).
    ``target == leaf`` is reported but never required empty: with finitely
    many leaves, the core of a leaf need not be approximated from one side.
    """
    sign = Side.parse(sign)
    if lam is None:
        lam = _lambda_side_or_empty(r, leaf, sign)
    image = pushforward(r.phi(target), lam)
    space = r.space
    if target == leaf:
        allowed = True
    elif sign is Side.POSITIVE:
        allowed = space.less(target, leaf)
    else:
        allowed = space.less(leaf, target)
    return TrivialMapReport(leaf, target, sign, image, not allowed)


def trivial_map_violations(r: UniversalCircleResult) -> list[TrivialMapReport]:
    out = []
    for leaf in r.leaves:
        for sign in Side:
            lam = _lambda_side_or_empty(r, leaf, sign)
            for target in r.leaves:
                rep = check_trivial_map(r, leaf, target, sign, lam)
                if rep.violation:
                    out.append(rep)
    return out


def leaf_lamination(r: UniversalCircleResult, leaf: str, sign, pair: UnivLaminationPair | None = None) -> Lamination:
    pair = univ_laminations(r) if pair is None else pair
    return pushforward(r.phi(leaf), pair.get(sign))


def is_fan(lam: Lamination) -> CirclePoint | None:
    if not lam:
        return None
    common = set(lam.leaves[0])
    for c in lam.leaves[1:]:
        common &= set(c)
    return min(common) if common else None


class Alternative(Enum):
    GENUINE = "GenuineCandidate"
    FAN = "FanEverywhere"
    MIXED = "Mixed"


@dataclass(frozen=True)
class Classification:
    verdict: Alternative
    per_leaf: dict

    def to_json(self):
        return {
            "classification": self.verdict.value,
            "leaves": {leaf: info for leaf, info in sorted(self.per_leaf.items())},
        }


def classify_alternative(r: UniversalCircleResult, pair: UnivLaminationPair | None = None) -> Classification:
    """Fan test on every leaf that carries a nonempty positive lamination.

    Leaves whose pushforward is empty carry no information: a top leaf sees
    nothing above it, so it is skipped rather than counted as a non-fan.
    """
    pair = univ_laminations(r) if pair is None else pair
    detail = {}
    fans = genuine = 0
    for leaf in r.leaves:
        lam = leaf_lamination(r, leaf, Side.POSITIVE, pair)
        centre = is_fan(lam)
        if not lam:
            detail[leaf] = {"leaves": 0, "fan": None}
            continue
        detail[leaf] = {"leaves": len(lam), "fan": None if centre is None else str(centre)}
        if centre is not None:
            fans += 1
        elif _polygonal(lam):
            genuine += 1
    considered = sum(1 for v in detail.values() if v["leaves"])
    if considered and fans == considered:
        verdict = Alternative.FAN
    elif considered and genuine == considered:
        verdict = Alternative.GENUINE
    else:
        verdict = Alternative.MIXED
    return Classification(verdict, detail)


def _polygonal(lam: Lamination) -> bool:
    # some complementary region of the leaves is bounded by at least three of them
    return len(lam.endpoints()) >= 3


@dataclass(frozen=True)
class FixedPointReport:
    fixed: tuple[str, ...]
    branching: Branching

    @property
    def consistent(self) -> bool:
        return not (self.fixed and self.branching is Branching.TWO_SIDED)

    @property
    def status(self) -> str:
        return "Consistent" if self.consistent else "Inconsistent"

    def to_json(self):
        return {"status": self.status, "fixed": list(self.fixed), "branching": self.branching.value}


def fixed_point_check(r: UniversalCircleResult) -> FixedPointReport:
    perms = [p for p in (induced_permutation(r, g) for g in r.scenario.generators) if p is not None and None not in p]
    if not perms:
        raise NoGenerators("no generator acts on the whole universal circle")
    fixed = tuple(r.sections[i].name for i in range(r.n) if all(p[i] == i for p in perms))
    return FixedPointReport(fixed, r.space.classify_branching())
