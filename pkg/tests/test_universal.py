import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import points
from laminary.circle import ccw_distance, pt
from laminary.errors import LaminaryError, ScenarioError
from laminary.fuzz import random_two_sided_scenario
from laminary.universal import (Scenario, UniversalCircleResult, build_universal_circle, circular_names,
                                corpus_names, distinguishing_leaf, is_minimal, load_corpus, marker_step,
                                minimal_reduce, same_circular_order, section_block, short_step,
                                validate_scenario, verify_axioms, with_duplicates)

BUILDABLE = [n for n in corpus_names() if n != "crossing_markers"]


@given(points(), points())
def test_short_step_lands_on_target(p, q):
    """[DERIVED]"""
    d = short_step(p, q)
    assert -Fraction(1, 2) < d <= Fraction(1, 2)
    assert p + d == q


@given(points(), points())
def test_marker_step_is_antisymmetric(p, q):
    """[DERIVED] walking a marker down undoes walking it up, half turns included."""
    assert marker_step(p, q, True) == -marker_step(q, p, False)


def test_crossing_markers_are_rejected():
    """[TRIVIAL]"""
    with pytest.raises(ScenarioError) as info:
        validate_scenario(load_corpus("crossing_markers"))
    assert info.value.code == "CrossingMarkers"


def test_malformed_scenario():
    """[TRIVIAL]"""
    with pytest.raises(ScenarioError) as info:
        Scenario.from_json({"leaves": ["a"], "markers": [{"support": ["a"]}]})
    assert info.value.code == "MalformedScenario"


def test_unknown_mark_is_reported():
    """[TRIVIAL]"""
    s = Scenario.from_json({"leaves": ["a"], "circles": {"a": {"m": "0"}}})
    with pytest.raises(ScenarioError):
        s.point("a", "nope")


@pytest.mark.parametrize("name", BUILDABLE)
def test_corpus_builds_and_satisfies_axioms(name):
    """[DERIVED] exhaustive axiom check on every shipped scenario."""
    s = load_corpus(name)
    validate_scenario(s)
    r = build_universal_circle(s)
    rep = verify_axioms(r)
    assert rep.ok, rep.summary()


@pytest.mark.parametrize("name", BUILDABLE)
def test_values_wind_once_per_leaf(name):
    """[DERIVED] walk the sections in order and add up the counterclockwise steps."""
    r = build_universal_circle(load_corpus(name))
    for leaf in r.leaves:
        vals = [r.scenario.point(leaf, sec.values[leaf]) for sec in r.sections]
        total = sum(ccw_distance(vals[i], vals[(i + 1) % r.n]) for i in range(r.n))
        assert total == 1


@pytest.mark.parametrize("name", BUILDABLE)
def test_result_json_round_trip(name):
    """[DERIVED]"""
    r = build_universal_circle(load_corpus(name))
    text = json.dumps(r.to_json(), sort_keys=True)
    again = UniversalCircleResult.from_json(json.loads(text))
    assert json.dumps(again.to_json(), sort_keys=True) == text


@pytest.mark.parametrize("name", BUILDABLE)
def test_root_does_not_change_the_order(name):
    """[DERIVED]"""
    s = load_corpus(name)
    base = build_universal_circle(s)
    for root in s.space.leaves:
        assert circular_names(build_universal_circle(s, root=root)) == circular_names(base)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_fuzz_scenarios_satisfy_axioms(seed):
    """[DERIVED]"""
    s = random_two_sided_scenario(random.Random(seed))
    r = build_universal_circle(s)
    assert verify_axioms(r).ok
    shuffled = json.loads(json.dumps(s.to_json()))
    for key in ("leaves", "segments", "nonseparated", "markers"):
        shuffled[key] = shuffled[key][::-1]
    assert same_circular_order(r, build_universal_circle(Scenario.from_json(shuffled)))


def test_branch_leaves_own_blocks():
    """[TRIVIAL] each branch leaf owns a contiguous block of sections."""
    r = build_universal_circle(load_corpus("two_branches"))
    assert section_block(r, "lam") == [0, 1]
    assert section_block(r, "mu") == [2, 3]


@pytest.mark.parametrize("index,copies", [(0, 1), (2, 3)])
def test_reduction_undoes_duplication(index, copies):
    """[DERIVED]"""
    r = build_universal_circle(load_corpus("corner_distinct"))
    blown = with_duplicates(r, index, copies)
    assert blown.n == r.n + copies and not is_minimal(blown)
    red = minimal_reduce(blown)
    assert red.result.n == r.n
    assert circular_names(red.result) == circular_names(r)
    assert sorted(set(red.collapse.values())) == list(range(r.n))
    again = minimal_reduce(red.result)
    assert circular_names(again.result) == circular_names(red.result)


def test_distinct_sections_are_distinguished():
    """[DERIVED]"""
    r = minimal_reduce(build_universal_circle(load_corpus("genuine_1"))).result
    for i in range(r.n):
        for j in range(i + 1, r.n):
            leaf = distinguishing_leaf(r, i, j)
            assert leaf is not None
            assert r.value(i, leaf) != r.value(j, leaf)


def test_errors_carry_codes():
    """[TRIVIAL]"""
    assert issubclass(ScenarioError, LaminaryError)
    assert ScenarioError("X", "msg").code == "X"


def _chain(**overrides):
    data = {"leaves": ["a", "b", "c"], "segments": [["a", "b", "c"]],
            "circles": {v: {"p": "0", "q": "1/2"} for v in "abc"},
            "markers": [{"name": "M", "support": ["a", "b"], "points": ["p", "p"]}]}
    data.update(overrides)
    return Scenario.from_json(data)


@pytest.mark.parametrize("overrides,code", [
    ({"circles": {"a": {"p": "0"}, "b": {"p": "0", "q": "1/2"}, "c": {"p": "0", "q": "1/2"}}}, "TooFewMarks"),
    ({"circles": {v: {"p": "0", "q": "1"} for v in "abc"}}, "DuplicateMark"),
    ({"markers": [{"name": "M", "support": ["a"], "points": ["p"]}]}, "MalformedMarker"),
    ({"markers": [{"name": "M", "support": ["a", "c"], "points": ["p", "p"]}]}, "DisconnectedSupport"),
    ({"markers": [{"name": "M", "support": ["b", "a"], "points": ["p", "p"]}]}, "DisconnectedSupport"),
    ({"markers": [{"name": "M", "support": ["a", "b"], "points": ["p", "zz"]}]}, "UnknownMark"),
])
def test_validation_codes(overrides, code):
    """[TRIVIAL]"""
    with pytest.raises(ScenarioError) as info:
        validate_scenario(_chain(**overrides))
    assert info.value.code == code


def test_valid_chain_passes():
    """[TRIVIAL]"""
    rep = validate_scenario(_chain())
    assert rep.ok and rep.checked_markers == 1 and rep.warnings == []
