"""Command-line entry point: ``laminary <command> ...``.

Exit codes: 0 success, 1 invalid input, 2 internal invariant violation,
64 usage error.  JSON output has sorted keys and a trailing newline so that
identical inputs give byte-identical files.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import InvariantViolation, LaminaryError, NotMinimal, UnknownLeaf
from .hyperbolic import chord_to_geodesic, svg_fragment
from .invariant import (classify_alternative, fixed_point_check, generator_invariance,
                        lamination_names, leaf_lamination, trivial_map_violations, univ_laminations)
from .laminations import Lamination
from .leafspace import Side
from .universal import (Scenario, UniversalCircleResult, build_universal_circle, minimal_reduce,
                        validate_scenario, verify_axioms)

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# output helpers


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _use_color(stream) -> bool:
    mode = os.environ.get("LAMINARY_COLOR", "auto")
    return mode == "auto" and hasattr(stream, "isatty") and stream.isatty()


def _status(word: str, ok: bool, stream) -> str:
    if not _use_color(stream):
        return word
    return f"\033[{32 if ok else 31}m{word}\033[0m"


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise LaminaryError(f"{path} is not valid JSON: {exc}") from exc


def _load_result(path: str) -> UniversalCircleResult:
    return UniversalCircleResult.from_json(_load(path))


def _pair_for(r: UniversalCircleResult):
    try:
        return univ_laminations(r)
    except NotMinimal as exc:
        raise NotMinimal(f"{exc}; use the reduce command") from exc


# --------------------------------------------------------------------------
# rendering


@dataclass(frozen=True)
class RenderSpec:
    leaf: str | None = None
    sign: str = "both"
    size_px: int = 512
    plus_color: str = "#d62728"
    minus_color: str = "#1f77b4"
    circle_color: str = "#000000"
    stroke: float = 1.5

    def __post_init__(self):
        if self.size_px < 64:
            raise UsageError("size must be at least 64 pixels")
        if self.sign not in ("both", "+", "-", "positive", "negative"):
            raise UsageError(f"unknown sign {self.sign!r}")


def render_laminations(plus: Lamination, minus: Lamination, spec: RenderSpec) -> str:
    """SVG document: the unit circle and the geodesics of both laminations."""
    size = spec.size_px
    margin = 8
    radius = size / 2 - margin
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<circle cx="{size / 2:.9f}" cy="{size / 2:.9f}" r="{radius:.9f}" fill="none" '
        f'stroke="{spec.circle_color}" stroke-width="{spec.stroke}"/>',
    ]
    layers = []
    if spec.sign in ("both", "+", "positive"):
        layers.append(("plus", plus, spec.plus_color))
    if spec.sign in ("both", "-", "negative"):
        layers.append(("minus", minus, spec.minus_color))
    for name, lam, color in layers:
        lines.append(f'<g id="{name}" fill="none" stroke="{color}" stroke-width="{spec.stroke}">')
        for c in sorted(lam.leaves):
            lines.append(f'<path d="{svg_fragment(chord_to_geodesic(c), size, margin)}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(r: UniversalCircleResult, spec: RenderSpec) -> str:
    """Render one leaf's pushed-forward laminations, or the universal ones."""
    pair = _pair_for(r)
    if spec.leaf is None:
        return render_laminations(pair.plus, pair.minus, spec)
    if spec.leaf not in r.leaves:
        raise UnknownLeaf(spec.leaf)
    return render_laminations(leaf_lamination(r, spec.leaf, Side.POSITIVE, pair),
                              leaf_lamination(r, spec.leaf, Side.NEGATIVE, pair), spec)


# --------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    s = Scenario.from_json(_load(args.scenario))
    report = validate_scenario(s)
    print(_status("OK", True, sys.stdout))
    for w in report.warnings:
        print(f"warning: {w}")
    return EXIT_OK


def cmd_build(args) -> int:
    s = Scenario.from_json(_load(args.scenario))
    r = build_universal_circle(s)
    _emit(dumps(r.to_json()), args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    red = minimal_reduce(_load_result(args.result))
    _emit(dumps(red.result.to_json()), args.output)
    return EXIT_OK


def laminations_report(r: UniversalCircleResult) -> dict:
    pair = _pair_for(r)
    per_leaf = {}
    for leaf in r.leaves:
        per_leaf[leaf] = {sign.value: leaf_lamination(r, leaf, sign, pair).to_json() for sign in Side}
    return {
        "plus": lamination_names(r, pair.plus),
        "minus": lamination_names(r, pair.minus),
        "leaves": per_leaf,
        "classification": classify_alternative(r, pair).to_json(),
        "trivial_map_violations": len(trivial_map_violations(r)),
        "generator_invariance_failures": [list(x) for x in generator_invariance(r, pair)],
    }


def cmd_laminations(args) -> int:
    _emit(dumps(laminations_report(_load_result(args.result))), args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    r = _load_result(args.result)
    cl = classify_alternative(r)
    print(cl.verdict.value)
    if args.detail:
        sys.stdout.write(dumps(cl.to_json()))
    if r.scenario.generators:
        try:
            print(f"fixed points: {fixed_point_check(r).status}")
        except LaminaryError:
            pass
    return EXIT_OK


def cmd_render(args) -> int:
    spec = RenderSpec(leaf=args.leaf, sign=args.sign, size_px=args.size)
    _emit(render_svg(_load_result(args.result), spec), args.output)
    return EXIT_OK


def fuzz_summary(cases: int, seed: int) -> dict:
    from .fuzz import random_two_sided_scenario

    rng = random.Random(seed)
    failures = []
    for i in range(cases):
        s = random_two_sided_scenario(rng, f"fuzz{i}")
        try:
            r = minimal_reduce(build_universal_circle(s)).result
            ax = verify_axioms(r)
            if not ax.ok:
                failures.append({"case": i, "axioms": ax.summary()})
                continue
            pair = univ_laminations(r)
            bad = len(trivial_map_violations(r)) + len(generator_invariance(r, pair))
            if bad:
                failures.append({"case": i, "violations": bad})
        except LaminaryError as exc:
            failures.append({"case": i, "error": f"{exc.code}: {exc}"})
    return {"cases": cases, "seed": seed, "failures": failures}


def cmd_fuzz(args) -> int:
    if args.cases < 0:
        raise UsageError("--cases must be non-negative")
    summary = fuzz_summary(args.cases, args.seed)
    sys.stdout.write(dumps(summary))
    return EXIT_INTERNAL if summary["failures"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="laminary", description="Universal circles and invariant laminations from finite data.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    c = sub.add_parser("validate", help="check a scenario file")
    c.add_argument("scenario")
    c.set_defaults(func=cmd_validate)
    c = sub.add_parser("build", help="build the universal circle of a scenario")
    c.add_argument("scenario")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_build)
    c = sub.add_parser("reduce", help="collapse sections no leaf tells apart")
    c.add_argument("result")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_reduce)
    c = sub.add_parser("laminations", help="invariant laminations of a reduced result")
    c.add_argument("result")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_laminations)
    c = sub.add_parser("classify", help="fan-everywhere versus genuine classification")
    c.add_argument("result")
    c.add_argument("--detail", action="store_true", help="also print per-leaf JSON")
    c.set_defaults(func=cmd_classify)
    c = sub.add_parser("render", help="SVG of the laminations at one leaf")
    c.add_argument("result")
    c.add_argument("--leaf", help="leaf to push forward to; default is the universal circle")
    c.add_argument("--sign", default="both", choices=["both", "+", "-"])
    c.add_argument("--size", type=int, default=512)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_render)
    c = sub.add_parser("fuzz", help="run random two-sided scenarios through the pipeline")
    c.add_argument("--cases", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"{_status('internal error', False, sys.stderr)}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except LaminaryError as exc:
        text = str(exc)
        if text.startswith(f"{exc.code}: "):
            text = text[len(exc.code) + 2:]
        print(f"{_status(exc.code, False, sys.stderr)}: {text}", file=sys.stderr)
        return EXIT_INVALID


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
