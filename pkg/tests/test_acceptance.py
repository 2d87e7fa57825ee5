"""End-to-end acceptance checks; each prints one PASS/FAIL line in the summary."""
import json
import random
import time
from fractions import Fraction
from importlib import resources
from itertools import product

import mpmath

from conftest import record
from laminary.circle import Linking, PointPair, linked, pt
from laminary.cli import main
from laminary.errors import Crossing
from laminary.fuzz import random_family, random_map_pair_case, random_two_sided_scenario
from laminary.hyperbolic import chord_to_geodesic, geodesic_from_vectors, geodesics_cross_float
from laminary.invariant import (Alternative, classify_alternative, fixed_point_check, generator_invariance,
                                trivial_map_violations, univ_laminations)
from laminary.laminations import make_lamination
from laminary.leafspace import Branching, Side
from laminary.monotone import (TriadicRational, compose, core_union, cores_unlinked, devil_core_member,
                               devil_eval, pushforward, unlinked_extension_check)
from laminary.universal import (Scenario, build_universal_circle, ccw_run, corpus_names, distinguishing_leaf,
                                is_minimal, load_corpus, minimal_reduce, same_circular_order, section_block,
                                verify_axioms, with_duplicates)

BUILDABLE = [n for n in corpus_names() if n != "crossing_markers"]


# -- 1 ----------------------------------------------------------------------


def _staircase_by_formula(digits: str) -> Fraction:
    # ternary 2 -> binary 1, ternary 0 -> binary 0; the first ternary 1 ends it with a binary 1
    total = Fraction(0)
    for j, d in enumerate(digits, start=1):
        total += Fraction(0 if d == "0" else 1, 2 ** j)
        if d == "1":
            break
    return total


def _in_removed_third(q: Fraction, levels: int) -> bool:
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(levels):
        third = (hi - lo) / 3
        if lo + third < q < lo + 2 * third:
            return True
        lo, hi = (lo, lo + third) if q <= lo + third else (lo + 2 * third, hi)
    return False


def test_criterion_01_staircase():
    """[PAPER] closed-form staircase values and Cantor membership."""
    words = ["".join(w) for w in product("012", repeat=7)]
    start = time.perf_counter()
    values = [devil_eval(TriadicRational(w)) for w in words]
    members = [devil_core_member(TriadicRational(w)) for w in words]
    elapsed = time.perf_counter() - start
    bad_values = sum(v != pt(_staircase_by_formula(w)) for v, w in zip(values, words))
    bad_members = sum(m == _in_removed_third(TriadicRational(w).value, 7) for m, w in zip(members, words))
    ok = len(words) == 2187 and not bad_values and not bad_members and elapsed < 1
    record(1, ok, f"{len(words)} values, {bad_values} value and {bad_members} membership mismatches, {elapsed:.3f}s")
    assert ok


# -- 2 and 3 ----------------------------------------------------------------


def _pair_cases():
    rng = random.Random(20240601)
    return [random_map_pair_case(rng) for _ in range(1000)]


def test_criterion_02_pushforward_is_a_lamination():
    cases = _pair_cases()
    start = time.perf_counter()
    crossings = 0
    for f, _, lam in cases:
        try:
            make_lamination(pushforward(f, lam).leaves)
        except Crossing:
            crossings += 1
    elapsed = time.perf_counter() - start
    gaps = max(len(f.gaps()) for f, _, _ in cases)
    leaves = max(len(lam) for _, _, lam in cases)
    ok = crossings == 0 and elapsed < 10 and gaps <= 10 and leaves <= 20
    record(2, ok, f"1000 cases (max {gaps} gaps, {leaves} leaves), {crossings} crossings, {elapsed:.2f}s")
    assert ok


def test_criterion_03_functoriality():
    failures = sum(pushforward(compose(g, f), lam) != pushforward(g, pushforward(f, lam))
                   for f, g, lam in _pair_cases())
    record(3, failures == 0, f"1000 cases, {failures} failures")
    assert failures == 0


# -- 4 ----------------------------------------------------------------------


def test_criterion_04_unlinked_extension():
    rng = random.Random(7)
    families = failures = jumps = 0
    for _ in range(150):
        fam, xs, ys = random_family(rng)
        rep = unlinked_extension_check(fam, xs, ys)  # raises if the hypothesis fails
        families += 1
        jumps += bool(rep.label_jumps)
        if not cores_unlinked(core_union(fam, xs), core_union(fam, ys)):
            failures += 1
    ok = families >= 100 and failures == 0
    record(4, ok, f"{families} families, {failures} conclusion failures, {jumps} with label jumps")
    assert ok


# -- 5 ----------------------------------------------------------------------


def _origin_index(r, leaf, mark):
    return next(i for i, sec in enumerate(r.sections) if (leaf, mark) in sec.origins)


def _block_ends(r, first_leaf, last_leaf):
    a, b = section_block(r, first_leaf), section_block(r, last_leaf)
    x = r.sections[a[0]].values[first_leaf]
    x_prime = r.sections[b[-1]].values[last_leaf]
    return _origin_index(r, first_leaf, x), _origin_index(r, last_leaf, x_prime)


def _reordered(s: Scenario) -> Scenario:
    data = json.loads(json.dumps(s.to_json()))
    for key in ("leaves", "segments", "nonseparated", "markers"):
        data[key] = data[key][::-1]
    return Scenario.from_json(data)


def test_criterion_05_worked_examples():
    """[PAPER] the four worked constructions."""
    notes, ok = [], True
    results = {}
    for name in ("marker_interval", "two_branches", "corner_distinct", "corner_merged"):
        r = build_universal_circle(load_corpus(name))
        results[name] = r
        summary = verify_axioms(r).summary()
        good = summary["axiom2_monotone"] == "pass" and summary["axiom4_gap"] == "pass"
        ok &= good
        notes.append(f"{name} n={r.n} axioms 2/4 {'ok' if good else 'FAIL'}")

    r = results["marker_interval"]
    sx, sxp = _origin_index(r, "l0", "x"), _origin_index(r, "l2", "xp")
    through = [i for i in range(r.n) if r.value(i, "l0") == r.scenario.point("l0", "x")
               and r.value(i, "l2") == r.scenario.point("l2", "xp")]
    interval = sx != sxp and sorted(ccw_run(r, sx, sxp)) == sorted(through)
    ok &= interval
    notes.append(f"interval s_x..s_x' = {ccw_run(r, sx, sxp)}")

    merged = _block_ends(results["corner_merged"], "lam", "lam2")
    distinct = _block_ends(results["corner_distinct"], "lam", "lam2")
    ok &= merged[0] == merged[1] and distinct[0] != distinct[1]
    notes.append(f"merged {merged}, distinct {distinct}")

    order_ok = True
    for name in ("corner_distinct", "corner_merged"):
        s = load_corpus(name)
        for root in s.space.leaves:
            order_ok &= same_circular_order(results[name], build_universal_circle(s, root=root))
            order_ok &= same_circular_order(results[name], build_universal_circle(_reordered(s), root=root))
    ok &= order_ok
    notes.append("order invariant" if order_ok else "order CHANGES")
    record(5, ok, "; ".join(notes))
    assert ok


# -- 6 ----------------------------------------------------------------------


def test_criterion_06_minimality():
    rng = random.Random(3)
    checked = 0
    ok = True
    for name in BUILDABLE:
        base = minimal_reduce(build_universal_circle(load_corpus(name))).result
        blown = with_duplicates(base, rng.randrange(base.n), rng.randint(1, 3))
        once = minimal_reduce(blown).result
        twice = minimal_reduce(once).result
        ok &= not is_minimal(blown) and once.n == base.n and twice.sections == once.sections
        for i in range(once.n):
            for j in range(i + 1, once.n):
                ok &= distinguishing_leaf(once, i, j) is not None
                checked += 1
    record(6, ok, f"{len(BUILDABLE)} scenarios reduced and idempotent, {checked} section pairs distinguished")
    assert ok


# -- 7 ----------------------------------------------------------------------


def _union_check(r):
    """Problems with the invariant laminations of a reduced result."""
    problems = []
    pair = univ_laminations(r)
    for sign in Side:
        make_lamination(pair.get(sign).leaves)
    for sign in r.space.branching_sides():
        if not pair.get(sign):
            problems.append(f"empty {sign.value}")
    if r.scenario.generators and generator_invariance(r, pair):
        problems.append("not invariant")
    problems += [f"trivial map {v.leaf}->{v.target}" for v in trivial_map_violations(r)]
    return problems


def test_criterion_07_union_is_lamination():
    start = time.perf_counter()
    hand = [n for n in BUILDABLE if load_corpus(n).space.classify_branching() is Branching.TWO_SIDED]
    bad = []
    for name in hand:
        r = minimal_reduce(build_universal_circle(load_corpus(name))).result
        bad += [f"{name}: {p}" for p in _union_check(r)]
    rng = random.Random(11)
    for k in range(100):
        s = random_two_sided_scenario(rng, f"fuzz{k}")
        r = minimal_reduce(build_universal_circle(s)).result
        bad += [f"fuzz{k}: {p}" for p in _union_check(r)]
    elapsed = time.perf_counter() - start
    ok = len(hand) >= 5 and not bad and elapsed < 30
    record(7, ok, f"{len(hand)} corpus + 100 fuzz scenarios, {len(bad)} problems, {elapsed:.1f}s")
    assert ok, bad[:5]


# -- 8 ----------------------------------------------------------------------


def test_criterion_08_classification():
    """[PAPER] fan, genuine and fixed-point fixtures."""
    def verdict(name):
        return classify_alternative(minimal_reduce(build_universal_circle(load_corpus(name))).result).verdict

    fan = verdict("fan") is Alternative.FAN
    genuine = [n for n in corpus_names() if n.startswith("genuine")]
    gen_ok = all(verdict(n) is Alternative.GENUINE for n in genuine)
    adv = fixed_point_check(minimal_reduce(build_universal_circle(load_corpus("adversarial_fixed_point"))).result)
    ok = fan and gen_ok and adv.status == "Inconsistent"
    record(8, ok, f"fan {'ok' if fan else 'FAIL'}, {len(genuine)} genuine {'ok' if gen_ok else 'FAIL'}, "
                  f"adversarial {adv.status}")
    assert ok


# -- 9 ----------------------------------------------------------------------


def test_criterion_09_geometry():
    exact = 0
    for a, b in product(range(8), repeat=2):
        if a != b:
            exact += chord_to_geodesic(PointPair(Fraction(a, 8), Fraction(b, 8))).residue() != 0
    triples = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)]
    vectors = [(Fraction(sx * p, h), Fraction(sy * q, h)) for p, q, h in triples for sx in (1, -1) for sy in (1, -1)]
    for u, v in product(vectors, repeat=2):
        if u != v and (u[0] + v[0], u[1] + v[1]) != (0, 0):
            exact += geodesic_from_vectors(u, v).residue() != 0

    rng = random.Random(5)
    worst = mpmath.mpf(0)
    for _ in range(1000):
        a, b = rng.sample(range(1, 10007), 2)
        worst = max(worst, abs(chord_to_geodesic(PointPair(Fraction(a, 10007), Fraction(b, 10007))).residue()))

    disagree = skipped = 0
    for _ in range(1000):
        ends = [Fraction(v, 10007) for v in rng.sample(range(10007), 4)]
        p, q = PointPair(ends[0], ends[1]), PointPair(ends[2], ends[3])
        cross, clearance = geodesics_cross_float(chord_to_geodesic(p), chord_to_geodesic(q))
        if clearance <= 1e-6:
            skipped += 1
        elif cross != (linked(p, q) is Linking.LINKED):
            disagree += 1
    ok = exact == 0 and worst < 1e-12 and disagree == 0
    record(9, ok, f"{exact} nonzero exact residues, max float residue {mpmath.nstr(worst, 3)}, "
                  f"{disagree} crossing disagreements ({skipped} in guard band)")
    assert ok


# -- 10 ---------------------------------------------------------------------


def _pipeline(name, out, capsys):
    files = {}
    src = str(resources.files("laminary") / "corpus" / f"{name}.json")
    raw, red = out / f"{name}.raw.json", out / f"{name}.json"
    if main(["build", src, "-o", str(raw)]) != 0:
        return {"stderr": capsys.readouterr().err.encode()}
    main(["reduce", str(raw), "-o", str(red)])
    main(["laminations", str(red), "-o", str(out / f"{name}.lams.json")])
    main(["render", str(red), "-o", str(out / f"{name}.svg")])
    leaf = load_corpus(name).space.leaves[0]
    main(["render", str(red), "--leaf", leaf, "-o", str(out / f"{name}.leaf.svg")])
    for path in sorted(out.glob(f"{name}.*")):
        files[path.name] = path.read_bytes()
    return files


def test_criterion_10_determinism(tmp_path, capsys):
    mismatched, produced = [], 0
    for name in corpus_names():
        runs = []
        for k in range(2):
            out = tmp_path / f"run{k}"
            out.mkdir(exist_ok=True)
            runs.append(_pipeline(name, out, capsys))
        produced += len(runs[0])
        if runs[0] != runs[1]:
            mismatched.append(name)
    ok = not mismatched and produced > 0
    record(10, ok, f"{len(corpus_names())} inputs, {produced} outputs compared, {len(mismatched)} differ")
    assert ok, mismatched
