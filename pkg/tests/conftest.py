from fractions import Fraction

from hypothesis import strategies as st

from laminary.circle import PointPair, pt

DENOM = 60


@st.composite
def points(draw, denom=DENOM):
    return pt(Fraction(draw(st.integers(0, denom - 1)), denom))


@st.composite
def pairs(draw, denom=DENOM):
    a, b = draw(st.lists(st.integers(0, denom - 1), min_size=2, max_size=2, unique=True))
    return PointPair(Fraction(a, denom), Fraction(b, denom))


ACCEPTANCE: list[str] = []


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
