import random
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from laminary.circle import Linking, PointPair, linked
from laminary.cli import RenderSpec, render_laminations
from laminary.errors import TooFewPoints
from laminary.hyperbolic import (QSqrt2, chord_to_geodesic, geodesic_from_vectors, geodesics_cross_float,
                                 ideal_polygon, svg_fragment, unit_vector)
from laminary.laminations import Lamination, boundary_hull, make_lamination

GOLDEN = Path(__file__).parent / "golden"

eighths = st.integers(0, 7).map(lambda k: Fraction(k, 8))


def test_qsqrt2_arithmetic():
    """[TRIVIAL]"""
    r2 = QSqrt2(Fraction(0), Fraction(1))
    assert r2 * r2 == 2
    assert (1 + r2) / (1 + r2) == 1
    assert 1 / r2 == QSqrt2(Fraction(0), Fraction(1, 2))
    with pytest.raises(ZeroDivisionError):
        r2 / QSqrt2(Fraction(0))


@given(eighths, eighths)
def test_eighth_turns_are_exact(a, b):
    """[DERIVED] the residue vanishes in Q(sqrt 2)."""
    if a == b:
        return
    g = chord_to_geodesic(PointPair(a, b))
    assert g.residue() == 0
    x, y = unit_vector(a)
    assert x * x + y * y == 1


def test_known_centres():
    """[DERIVED] centre (1, 1) and radius 1 for the quarter chord."""
    g = chord_to_geodesic(PointPair(0, "1/4"))
    assert g.center == (1, 1) and g.radius_squared == 1
    assert chord_to_geodesic(PointPair(0, "1/2")).is_diameter


def test_pythagorean_vectors():
    """[DERIVED] rational endpoints give a rational centre."""
    g = geodesic_from_vectors((Fraction(3, 5), Fraction(4, 5)), (Fraction(-5, 13), Fraction(12, 13)))
    assert g.center == (Fraction(1, 7), Fraction(8, 7))
    assert g.radius_squared == Fraction(16, 49)
    assert g.residue() == 0


def test_float_residue_is_tiny():
    """[DERIVED]"""
    rng = random.Random(9)
    for _ in range(200):
        a, b = rng.sample(range(1, 997), 2)
        g = chord_to_geodesic(PointPair(Fraction(a, 997), Fraction(b, 997)))
        assert abs(g.residue()) < mpmath.mpf("1e-30")


def test_crossing_agrees_with_linking():
    """[DERIVED]"""
    rng = random.Random(4)
    for _ in range(300):
        pts = [Fraction(v, 360) for v in rng.sample(range(360), 4)]
        p, q = PointPair(pts[0], pts[1]), PointPair(pts[2], pts[3])
        cross, clearance = geodesics_cross_float(chord_to_geodesic(p), chord_to_geodesic(q))
        if clearance > 1e-6:
            assert cross == (linked(p, q) is Linking.LINKED)


def test_polygon_needs_three_vertices():
    """[TRIVIAL]"""
    with pytest.raises(TooFewPoints):
        ideal_polygon(["0", "1/2"])
    assert len(ideal_polygon(["0", "1/3", "2/3"])) == 3


def test_diameter_renders_as_a_line():
    """[TRIVIAL]"""
    d = svg_fragment(chord_to_geodesic(PointPair(0, "1/2")), 256, 8)
    assert d == "M 248.000000000 128.000000000 L 8.000000000 128.000000000"


def test_ideal_triangle_golden():
    """[TRIVIAL]"""
    svg = render_laminations(boundary_hull(["0", "1/3", "2/3"]), Lamination(), RenderSpec(size_px=256))
    assert svg == (GOLDEN / "ideal_triangle.svg").read_text()


def test_empty_render_is_just_the_circle():
    """[TRIVIAL]"""
    svg = render_laminations(Lamination(), Lamination(), RenderSpec())
    assert svg.count("<path") == 0 and "<circle" in svg


def test_render_is_order_independent():
    """[DERIVED] elements are sorted by chord, not by insertion."""
    chords = [PointPair(0, "1/5"), PointPair("2/5", "3/5"), PointPair("7/10", "9/10")]
    a = render_laminations(make_lamination(chords), Lamination(), RenderSpec())
    b = render_laminations(make_lamination(chords[::-1]), Lamination(), RenderSpec())
    assert a == b
