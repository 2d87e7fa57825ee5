"""Exact points, arcs and cyclic-order predicates on the circle.

Points are rational "turns" in [0, 1); one turn is the full circle and turns
increase counterclockwise.  Every predicate here is decided by exact rational
comparison, so there are no tolerances anywhere in this module.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, str, Fraction, "CirclePoint"]


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, an integer string, an int or a Fraction."""
    if isinstance(value, CirclePoint):
        return value.turn
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=True)
class CirclePoint:
    turn: Fraction

    def __init__(self, turn: RationalLike = 0):
        q = parse_rational(turn)
        object.__setattr__(self, "turn", q - (q.numerator // q.denominator))

    def __repr__(self) -> str:
        return f"CirclePoint({format_rational(self.turn)})"

    def __str__(self) -> str:
        return format_rational(self.turn)

    def __add__(self, other) -> "CirclePoint":
        return CirclePoint(self.turn + parse_rational(other))

    def __sub__(self, other) -> "CirclePoint":
        return CirclePoint(self.turn - parse_rational(other))


def pt(value: RationalLike) -> CirclePoint:
    """Shorthand constructor used all over the tests and corpus loaders."""
    if isinstance(value, CirclePoint):
        return value
    return CirclePoint(value)


def ccw_distance(a: CirclePoint, b: CirclePoint) -> Fraction:
    """Length of the counterclockwise arc from ``a`` to ``b``, in [0, 1)."""
    d = b.turn - a.turn
    return d + 1 if d < 0 else d


def cyclic_orient(a: CirclePoint, b: CirclePoint, c: CirclePoint) -> int:
    """+1 if (a, b, c) is counterclockwise, -1 if clockwise, 0 if degenerate."""
    if a == b or b == c or a == c:
        return 0
    return 1 if ccw_distance(a, b) < ccw_distance(a, c) else -1


def strictly_between(a: CirclePoint, x: CirclePoint, b: CirclePoint) -> bool:
    """True iff ``x`` lies in the open counterclockwise arc from ``a`` to ``b``.

    When ``a == b`` the open arc is the circle minus that point.
    """
    if a == b:
        return x != a
    return cyclic_orient(a, x, b) == 1


class Linking(enum.Enum):
    LINKED = "Linked"
    UNLINKED = "Unlinked"
    SHARED_ENDPOINT = "SharedEndpoint"


@dataclass(frozen=True, order=True)
class PointPair:
    """Unordered pair of distinct circle points, stored with ``a < b``."""

    a: CirclePoint
    b: CirclePoint

    def __init__(self, a: RationalLike, b: RationalLike):
        p, q = pt(a), pt(b)
        if p == q:
            raise ValueError(f"pair endpoints must be distinct, got {p} twice")
        if q < p:
            p, q = q, p
        object.__setattr__(self, "a", p)
        object.__setattr__(self, "b", q)

    def __iter__(self):
        yield self.a
        yield self.b

    def __contains__(self, p) -> bool:
        return pt(p) in (self.a, self.b)

    def __repr__(self) -> str:
        return f"{{{self.a},{self.b}}}"

    def other(self, p: CirclePoint) -> CirclePoint:
        if p == self.a:
            return self.b
        if p == self.b:
            return self.a
        raise ValueError(f"{p} is not an endpoint of {self!r}")


def linked(p: PointPair, q: PointPair) -> Linking:
    if p.a in (q.a, q.b) or p.b in (q.a, q.b):
        return Linking.SHARED_ENDPOINT
    inside = strictly_between(p.a, q.a, p.b) + strictly_between(p.a, q.b, p.b)
    return Linking.LINKED if inside == 1 else Linking.UNLINKED


@dataclass(frozen=True)
class Arc:
    """Counterclockwise arc from ``start`` to ``end`` with tagged endpoints.

    ``start == end`` denotes a single closed point.  The whole circle is not an
    arc; callers that need it use :class:`laminary.monotone.CoreSet`.
    """

    start: CirclePoint
    end: CirclePoint
    start_closed: bool = False
    end_closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "start", pt(self.start))
        object.__setattr__(self, "end", pt(self.end))
        if self.start == self.end and not (self.start_closed and self.end_closed):
            raise ValueError("a degenerate arc must be a closed point")

    @classmethod
    def open(cls, start, end) -> "Arc":
        return cls(pt(start), pt(end), False, False)

    @classmethod
    def closed(cls, start, end) -> "Arc":
        return cls(pt(start), pt(end), True, True)

    @classmethod
    def point(cls, p) -> "Arc":
        return cls(pt(p), pt(p), True, True)

    @property
    def is_point(self) -> bool:
        return self.start == self.end

    @property
    def length(self) -> Fraction:
        return ccw_distance(self.start, self.end)

    def closure(self) -> "Arc":
        return Arc(self.start, self.end, True, True)

    def __repr__(self) -> str:
        if self.is_point:
            return f"[{self.start}]"
        left = "[" if self.start_closed else "("
        right = "]" if self.end_closed else ")"
        return f"{left}{self.start},{self.end}{right}"


def arc_contains(arc: Arc, p: RationalLike) -> bool:
    x = pt(p)
    if x == arc.start:
        return arc.start_closed
    if x == arc.end:
        return arc.end_closed
    return strictly_between(arc.start, x, arc.end)
