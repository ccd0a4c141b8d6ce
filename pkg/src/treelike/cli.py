"""``treelike`` command line: build, verify, render, decide, heightfn."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .checks import certificate_loops, default_refine, run_suite
from .construct import build_tower
from .plcurve import PlanePath, Point2
from .render import parse_curves, render_svg
from .serialize import StateError, load_state, save_state
from .verify import NotGraphLikeError, decide_polygonal_loop, height_from_tree_path, verify_height_function

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(name):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}")
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be at least 1, got {v}")
        return v
    return conv


def _natural(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("TREELIKE_WORKERS")
    if env:
        try:
            w = int(env)
        except ValueError:
            raise UsageError(f"TREELIKE_WORKERS must be an integer, got {env!r}")
        if w < 1:
            raise UsageError("TREELIKE_WORKERS must be at least 1")
        return w
    return 1


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc}")


def _load(path):
    try:
        return load_state(path, check_digest=False)
    except FileNotFoundError:
        raise UsageError(f"state file {path} not found")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def cmd_build(args) -> int:
    t0 = time.perf_counter()
    levels = build_tower(args.levels)
    try:
        obj = save_state(levels, args.out)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}")
    last = obj["metadata"]["counts"][-1]
    print(f"built {args.levels} level(s) in {time.perf_counter() - t0:.1f}s -> {args.out}\n"
          f"digest {obj['digest']}\n"
          f"level {last['n']}: {last['edges_E']} + {last['edges_Et']} edges, "
          f"{last['breakpoints_pi']} / {last['breakpoints_pit']} breakpoints", file=sys.stderr)
    return EXIT_PASS


def cmd_verify(args) -> int:
    levels, digest_ok = _load(args.state)
    t0 = time.perf_counter()
    report = run_suite(levels, refine=args.refine, workers=_workers(args))
    report["sections"]["integrity"] = [{
        "name": "digest", "level": None, "passed": digest_ok,
        "detail": "" if digest_ok else "stored digest does not match the level data", "data": {}}]
    report["section_passed"]["integrity"] = digest_ok
    report["passed"] = all(report["section_passed"].values())
    report["refine"] = args.refine if args.refine is not None else {
        str(n): default_refine(n) for n in range(1, len(levels) + 1)}
    report["seconds"] = round(time.perf_counter() - t0, 3)
    _emit(report, args.out)
    for name, ok in sorted(report["section_passed"].items()):
        print(f"{'PASS' if ok else 'FAIL'}  {name}", file=sys.stderr)
        if not ok:
            for c in report["sections"][name]:
                if not c["passed"]:
                    print(f"      level {c['level']}: {c['name']}: {c['detail']}", file=sys.stderr)
    print("verdicts: " + ", ".join(f"{k}={v}" for k, v in sorted(report["verdicts"].items())),
          file=sys.stderr)
    return EXIT_PASS if report["passed"] else EXIT_FAIL


def cmd_render(args) -> int:
    levels, _ = _load(args.state)
    level = args.level or len(levels)
    if level > len(levels):
        raise UsageError(f"level {level} is not in 1..{len(levels)}")
    try:
        curves = parse_curves(args.curves, len(levels))
    except ValueError as exc:
        raise UsageError(str(exc))
    svg = render_svg(levels, level, curves, args.scale)
    try:
        Path(args.out).write_text(svg)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}")
    print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_PASS


def read_loop(path) -> PlanePath:
    """A loop file holds ``{"breakpoints": [[t, [x, y]], ...]}`` or ``{"points": [[x, y], ...]}``.

    Numbers may be integers, strings such as ``"3/8"``, or ``{"num", "exp"}`` objects.
    """
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not JSON: {exc}")
    try:
        if isinstance(obj, dict) and "points" in obj:
            return PlanePath.from_points([Point2.from_json(p) for p in obj["points"]])
        return PlanePath.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: malformed loop: {exc}")


def cmd_decide(args) -> int:
    loop = read_loop(args.loop)
    try:
        verdict = decide_polygonal_loop(loop, refine=args.refine or 0)
    except NotGraphLikeError as exc:
        raise UsageError(f"unsupported loop: {exc}")
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit(verdict.to_json(), args.out)
    print(f"{verdict.kind}: {verdict.reason}", file=sys.stderr)
    return EXIT_PASS


def cmd_heightfn(args) -> int:
    levels, _ = _load(args.state)
    n = args.level or len(levels)
    if n > len(levels):
        raise UsageError(f"level {n} is not in 1..{len(levels)}")
    refine = args.refine if args.refine is not None else default_refine(n)
    out = {}
    passed = True
    for name, tloop, ploop, L in certificate_loops(levels, n):
        h = height_from_tree_path(tloop, L)
        rep = verify_height_function(ploop, h, refine=refine, workers=_workers(args))
        passed &= rep.passed
        out[name] = {"loop": ploop.to_json(), "height": h.to_json(), "report": rep.to_json()}
        print(f"{'PASS' if rep.passed else 'FAIL'}  {name} at level {n}: "
              f"{rep.pairs_checked} pairs", file=sys.stderr)
    _emit({"level": n, "refine": refine, "loops": out}, args.out)
    return EXIT_PASS if passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treelike", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build the tower and write a state file")
    b.add_argument("--levels", type=_positive("--levels"), default=6)
    b.add_argument("--out", default="state.json")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run every invariant family on a state file")
    v.add_argument("--state", default="state.json")
    v.add_argument("--refine", type=_natural, default=None,
                   help="midpoint refinements of the pair grid (default: 1 up to level 4, then 0)")
    v.add_argument("--workers", type=_positive("--workers"), default=None)
    v.add_argument("--out", default=None, help="report path (default: stdout)")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="draw curves and trees as SVG")
    r.add_argument("--state", default="state.json")
    r.add_argument("--level", type=_positive("--level"), default=None)
    r.add_argument("--curves", default="gamma_n,gamma_t_n",
                   help="comma list from alpha, beta, gamma_n, gamma_t_n, gamma_K, gamma_t_K, trees")
    r.add_argument("--scale", type=_positive("--scale"), default=400, help="pixels per unit")
    r.add_argument("--out", default="figure.svg")
    r.set_defaults(func=cmd_render)

    d = sub.add_parser("decide", help="classify a polygonal loop")
    d.add_argument("loop", help="loop JSON file")
    d.add_argument("--refine", type=_natural, default=0)
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_decide)

    h = sub.add_parser("heightfn", help="tree-derived height functions of the certificate loops")
    h.add_argument("--state", default="state.json")
    h.add_argument("--level", type=_positive("--level"), default=None)
    h.add_argument("--refine", type=_natural, default=None)
    h.add_argument("--workers", type=_positive("--workers"), default=None)
    h.add_argument("--out", default=None)
    h.set_defaults(func=cmd_heightfn)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (UsageError, StateError) as exc:
        print(f"treelike {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
