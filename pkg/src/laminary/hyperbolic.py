"""Chords as geodesics of the Poincare disk, plus SVG path fragments.

Geometry is exact when the endpoint coordinates are: turns that are multiples
of 1/8 live in Q(sqrt 2), and callers may also pass rational unit vectors such
as (3/5, 4/5).  Other turns are evaluated with mpmath and carried as floats.
Combinatorial questions (linking, order) never look at these numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import mpmath

from .circle import PointPair, pt
from .errors import TooFewPoints

SVG_DIGITS = 9
PRECISION = 40


@dataclass(frozen=True)
class QSqrt2:
    """a + b*sqrt(2) with rational a, b."""

    a: Fraction
    b: Fraction = Fraction(0)

    @staticmethod
    def of(x) -> "QSqrt2":
        return x if isinstance(x, QSqrt2) else QSqrt2(Fraction(x))

    def __add__(self, o):
        o = QSqrt2.of(o)
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-QSqrt2.of(o))

    def __rsub__(self, o):
        return QSqrt2.of(o) - self

    def __mul__(self, o):
        o = QSqrt2.of(o)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = QSqrt2.of(o)
        norm = o.a * o.a - 2 * o.b * o.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        conj = QSqrt2(o.a, -o.b)
        num = self * conj
        return QSqrt2(num.a / norm, num.b / norm)

    def __rtruediv__(self, o):
        return QSqrt2.of(o) / self

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = QSqrt2(Fraction(o))
        return isinstance(o, QSqrt2) and self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2)

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt2" if self.a else f"{self.b}*sqrt2"


Scalar = Union[Fraction, QSqrt2, float, mpmath.mpf]

_H = QSqrt2(Fraction(0), Fraction(1, 2))  # sqrt(2)/2
_EIGHTHS = [(1, 0), (_H, _H), (0, 1), (-_H, _H), (-1, 0), (-_H, -_H), (0, -1), (_H, -_H)]


def _exact(x):
    if isinstance(x, QSqrt2):
        return x if x.b else x.a
    return Fraction(x)


def unit_vector(p) -> tuple[Scalar, Scalar]:
    """Coordinates of a boundary point; exact for multiples of 1/8 turn."""
    t = pt(p).turn
    k = t * 8
    if k.denominator == 1:
        x, y = _EIGHTHS[int(k)]
        return _exact(x), _exact(y)
    with mpmath.workdps(PRECISION):
        angle = 2 * mpmath.pi * mpmath.mpf(t.numerator) / t.denominator
        return +mpmath.cos(angle), +mpmath.sin(angle)


def _is_approx(*xs) -> bool:
    return any(isinstance(x, (float, mpmath.mpf)) for x in xs)


def _mp(x):
    if isinstance(x, QSqrt2):
        return mpmath.mpf(x.a.numerator) / x.a.denominator + \
            mpmath.mpf(x.b.numerator) / x.b.denominator * mpmath.sqrt(2)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class DiskGeodesic:
    """A diameter, or an arc of the circle orthogonal to the unit circle.

    ``u`` and ``v`` are the endpoint unit vectors; ``endpoints`` is the chord
    when the geodesic came from circle points.
    """

    u: tuple
    v: tuple
    kind: str
    center: tuple | None = None
    radius_squared: Scalar | None = None
    endpoints: PointPair | None = None

    @property
    def is_diameter(self) -> bool:
        return self.kind == "Diameter"

    def residue(self) -> Scalar:
        """|c|^2 - r^2 - 1; exactly zero for exact input."""
        if self.is_diameter:
            return Fraction(0)
        cx, cy = self.center
        if _is_approx(cx, cy):
            with mpmath.workdps(PRECISION):
                return cx * cx + cy * cy - self.radius_squared - 1
        return cx * cx + cy * cy - self.radius_squared - 1

    def center_float(self) -> tuple[float, float]:
        return float(self.center[0]), float(self.center[1])

    def radius_float(self) -> float:
        with mpmath.workdps(PRECISION):
            return float(mpmath.sqrt(_mp(self.radius_squared)))

    def svg_path(self, size: int = 512, margin: int = 8) -> str:
        return svg_fragment(self, size, margin)


def geodesic_from_vectors(u, v, endpoints: PointPair | None = None) -> DiskGeodesic:
    """Geodesic between unit vectors ``u`` and ``v`` (distinct)."""
    if _is_approx(*u, *v):
        with mpmath.workdps(PRECISION):
            return _geodesic(tuple(map(_mp, u)), tuple(map(_mp, v)), endpoints)
    return _geodesic(u, v, endpoints)


def _geodesic(u, v, endpoints):
    ux, uy = u
    vx, vy = v
    dot = ux * vx + uy * vy
    if dot == -1:
        return DiskGeodesic(u, v, "Diameter", endpoints=endpoints)
    cx = (ux + vx) / (1 + dot)
    cy = (uy + vy) / (1 + dot)
    # measured to an endpoint, so the residue below is a real check
    r2 = (cx - ux) * (cx - ux) + (cy - uy) * (cy - uy)
    if not _is_approx(cx, cy, r2):
        cx, cy, r2 = _exact(cx), _exact(cy), _exact(r2)
    return DiskGeodesic(u, v, "OrthoArc", (cx, cy), r2, endpoints)


def chord_to_geodesic(c) -> DiskGeodesic:
    c = c if isinstance(c, PointPair) else PointPair(*c)
    if (c.b.turn - c.a.turn) == Fraction(1, 2):
        return DiskGeodesic(unit_vector(c.a), unit_vector(c.b), "Diameter", endpoints=c)
    return geodesic_from_vectors(unit_vector(c.a), unit_vector(c.b), c)


def ideal_polygon(points: Iterable) -> list[DiskGeodesic]:
    ps = sorted({pt(p) for p in points})
    if len(ps) < 3:
        raise TooFewPoints(f"an ideal polygon needs at least three vertices, got {len(ps)}")
    return [chord_to_geodesic(PointPair(ps[i], ps[(i + 1) % len(ps)])) for i in range(len(ps))]


# --------------------------------------------------------------------------
# float intersection, used to cross-check rendering against linked()


def _as_curve(g: DiskGeodesic):
    if g.is_diameter:
        return ("line", (float(g.u[0]), float(g.u[1])))
    return ("circle", g.center_float(), g.radius_float())


def _intersections(g1: DiskGeodesic, g2: DiskGeodesic) -> list[tuple[float, float]]:
    c1, c2 = _as_curve(g1), _as_curve(g2)
    if c1[0] == "line" and c2[0] == "line":
        (a, b), (c, d) = c1[1], c2[1]
        return [(0.0, 0.0)] if abs(a * d - b * c) > 1e-15 else []
    if c1[0] == "line":
        c1, c2 = c2, c1
    if c2[0] == "line":
        (cx, cy), r = c1[1], c1[2]
        dx, dy = c2[1]
        # points s*(dx,dy) on the circle: s^2 - 2 s (c.d) + |c|^2 - r^2 = 0
        cd = cx * dx + cy * dy
        disc = cd * cd - (cx * cx + cy * cy - r * r)
        if disc < 0:
            return []
        root = math.sqrt(disc)
        return [((cd + e * root) * dx, (cd + e * root) * dy) for e in (1, -1)]
    (x1, y1), r1 = c1[1], c1[2]
    (x2, y2), r2 = c2[1], c2[2]
    dx, dy = x2 - x1, y2 - y1
    d = math.hypot(dx, dy)
    if d == 0 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    mx, my = x1 + a * dx / d, y1 + a * dy / d
    return [(mx + h * dy / d, my - h * dx / d), (mx - h * dy / d, my + h * dx / d)]


def geodesics_cross_float(g1: DiskGeodesic, g2: DiskGeodesic) -> tuple[bool, float]:
    """(cross inside the open disk, clearance).

    The clearance is how far the decision is from flipping: the distance of
    the nearest intersection point from the boundary, or the smallest
    distance between endpoints of the two geodesics.
    """
    ends = [g1.u, g1.v], [g2.u, g2.v]
    clearance = min(math.dist((float(p[0]), float(p[1])), (float(q[0]), float(q[1])))
                    for p in ends[0] for q in ends[1])
    pts = _intersections(g1, g2)
    cross = False
    for x, y in pts:
        rho = math.hypot(x, y)
        clearance = min(clearance, abs(1 - rho))
        if rho < 1:
            cross = True
    return cross, clearance


# --------------------------------------------------------------------------
# SVG


def _fmt(x: float) -> str:
    s = f"{x:.{SVG_DIGITS}f}"
    return "0.000000000" if s == "-0.000000000" else s


def to_screen(p, size: int, margin: int) -> tuple[float, float]:
    radius = size / 2 - margin
    return size / 2 + radius * float(p[0]), size / 2 - radius * float(p[1])


def svg_fragment(g: DiskGeodesic, size: int = 512, margin: int = 8) -> str:
    """Path data for one geodesic: a line for a diameter, else a minor arc."""
    u, v = g.u, g.v
    if float(u[0]) * float(v[1]) - float(u[1]) * float(v[0]) < 0:
        # start where the counterclockwise boundary arc to the other end is short
        u, v = v, u
    x1, y1 = to_screen(u, size, margin)
    x2, y2 = to_screen(v, size, margin)
    if g.is_diameter:
        return f"M {_fmt(x1)} {_fmt(y1)} L {_fmt(x2)} {_fmt(y2)}"
    r = g.radius_float() * (size / 2 - margin)
    return f"M {_fmt(x1)} {_fmt(y1)} A {_fmt(r)} {_fmt(r)} 0 0 1 {_fmt(x2)} {_fmt(y2)}"
