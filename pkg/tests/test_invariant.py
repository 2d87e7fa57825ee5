import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laminary.circle import PointPair
from laminary.errors import EmptySide, NoGenerators, NotMinimal, UnknownLeaf
from laminary.fuzz import random_two_sided_scenario
from laminary.invariant import (Alternative, check_trivial_map, classify_alternative, expected_nonempty,
                                fixed_point_check, generator_invariance, is_fan, lambda_side,
                                lamination_names, leaves_on_side, side_core, trivial_map_violations,
                                univ_laminations)
from laminary.laminations import make_lamination
from laminary.leafspace import Side
from laminary.universal import (Scenario, build_universal_circle, load_corpus, minimal_reduce,
                                with_duplicates)


def reduced(name_or_scenario):
    s = load_corpus(name_or_scenario) if isinstance(name_or_scenario, str) else name_or_scenario
    return minimal_reduce(build_universal_circle(s)).result


def side_lamination_by_segments(r, leaf, sign):
    # a segment [i, i+1] of the section circle is in some core iff a leaf on
    # that side sees two different values at its ends; gaps are maximal runs
    # of the remaining segments, and each spans one chord
    others = leaves_on_side(r, leaf, sign)
    rising = {i for i in range(r.n) for mu in others if r.value(i, mu) != r.value((i + 1) % r.n, mu)}
    if len(rising) == r.n:
        return make_lamination([])
    start = next(i for i in range(r.n) if i in rising)
    chords, run = [], None
    for k in range(1, r.n + 1):
        i = (start + k) % r.n
        if i not in rising and run is None:
            run = i
        elif i in rising and run is not None:
            chords.append(PointPair(r.position(run), r.position(i)))
            run = None
    return make_lamination(chords)


@pytest.mark.parametrize("name", ["two_branches", "corner_distinct", "genuine_1", "genuine_3", "fan", "hybrid"])
def test_side_laminations_match_segment_oracle(name):
    """[DERIVED]"""
    r = reduced(name)
    for leaf in r.leaves:
        for sign in Side:
            if leaves_on_side(r, leaf, sign):
                assert lambda_side(r, leaf, sign) == side_lamination_by_segments(r, leaf, sign)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_fuzz_side_laminations_match_segment_oracle(seed):
    """[DERIVED]"""
    r = reduced(random_two_sided_scenario(random.Random(seed)))
    pair = univ_laminations(r)
    union = {s: set() for s in Side}
    for leaf in r.leaves:
        for sign in Side:
            if leaves_on_side(r, leaf, sign):
                union[sign] |= set(side_lamination_by_segments(r, leaf, sign).leaves)
    assert set(pair.plus.leaves) == union[Side.POSITIVE]
    assert set(pair.minus.leaves) == union[Side.NEGATIVE]
    assert trivial_map_violations(r) == []


def test_side_core_errors():
    """[TRIVIAL]"""
    r = reduced("chain")
    with pytest.raises(UnknownLeaf):
        side_core(r, "nope", "+")
    with pytest.raises(EmptySide):
        side_core(r, "c2", "+")
    assert side_core(r, "c0", "+").contributors == ("c1", "c2")


def test_non_minimal_input_is_refused():
    """[TRIVIAL]"""
    r = reduced("genuine_2")
    with pytest.raises(NotMinimal):
        univ_laminations(with_duplicates(r, 0, 2))


def test_top_leaves_leave_the_laminations_empty():
    """[TRIVIAL] two branch leaves with nothing above them force nothing."""
    r = reduced("two_branches")
    assert expected_nonempty(r) == set()
    pair = univ_laminations(r)
    assert not pair.plus and not pair.minus


def test_two_sided_scenarios_force_both_signs():
    """[TRIVIAL]"""
    r = reduced("genuine_4")
    assert expected_nonempty(r) == {Side.POSITIVE, Side.NEGATIVE}
    pair = univ_laminations(r)
    assert pair.plus and pair.minus
    names = lamination_names(r, pair.plus)
    assert all(len(p) == 2 and p[0] != p[1] for p in names)


def test_trivial_map_report_fields():
    """[TRIVIAL]"""
    r = reduced("genuine_1")
    leaf = r.leaves[0]
    rep = check_trivial_map(r, leaf, leaf, "+")
    assert not rep.required_empty and not rep.violation


def test_fan_detection():
    """[TRIVIAL]"""
    fan = make_lamination([PointPair(0, "1/4"), PointPair(0, "1/2"), PointPair("3/4", 0)])
    assert str(is_fan(fan)) == "0"
    tri = make_lamination([PointPair(0, "1/3"), PointPair("1/3", "2/3"), PointPair("2/3", 0)])
    assert is_fan(tri) is None
    assert is_fan(make_lamination([])) is None


@pytest.mark.parametrize("name,verdict", [
    ("fan", Alternative.FAN),
    ("genuine_1", Alternative.GENUINE),
    ("hybrid", Alternative.MIXED),
])
def test_classification(name, verdict):
    """[TRIVIAL]"""
    assert classify_alternative(reduced(name)).verdict is verdict


def test_swap_generator_preserves_laminations():
    """[DERIVED]"""
    r = reduced("symmetric_swap")
    assert generator_invariance(r, univ_laminations(r)) == []
    assert fixed_point_check(r).consistent


def test_no_generators():
    """[TRIVIAL]"""
    with pytest.raises(NoGenerators):
        fixed_point_check(reduced("genuine_1"))


def _with_identity(name):
    data = load_corpus(name).to_json()
    data["generators"] = [{"name": "e", "leaves": {v: v for v in data["leaves"]},
                           "marks": {v: {m: m for m in marks} for v, marks in data["circles"].items()}}]
    return Scenario.from_json(data)


def test_fixed_sections_are_fine_without_two_sided_branching():
    """[DERIVED] a chain may have fixed sections."""
    rep = fixed_point_check(reduced(_with_identity("chain")))
    assert rep.fixed and rep.consistent and rep.status == "Consistent"


def test_fixed_sections_with_two_sided_branching_are_flagged():
    """[DERIVED]"""
    rep = fixed_point_check(reduced("adversarial_fixed_point"))
    assert rep.status == "Inconsistent"
    assert rep.to_json()["branching"] == "TwoSided"
