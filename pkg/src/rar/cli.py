"""Command-line entry point.

Exit status contract: 0 success, 1 verification/check failure,
2 environment/IO failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .ast_nodes import Severity
from .checker import check_program
from .emitter import Dialect, EmitOptions, emit_program
from .frontend import parse_file
from .harness import (
    DifferentialError,
    default_corpus_dir,
    exhaustive_check,
    find_compiler,
    minimize_failure,
    run_differential,
    run_randomized,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ENV = 2

_DIALECTS = {
    "ac": Dialect.ALGORITHMIC_C,
    "vivado": Dialect.VIVADO_HLS,
    "plain": Dialect.PLAIN_CXX,
}

# (capacity, depth, alphabet) triples for the small-scope sweep.
EXHAUSTIVE_SWEEP = [(1, 4, 2), (2, 5, 3), (3, 6, 4), (4, 5, 5)]


def cmd_check(paths: list[str], as_json: bool) -> int:
    all_diags = []
    for path in paths:
        try:
            program, diagnostics = parse_file(path)
        except OSError as e:
            print(f"error: cannot read {path}: {e}", file=sys.stderr)
            return EXIT_ENV
        if program is not None:
            diagnostics = diagnostics + check_program(program)
        all_diags.extend(diagnostics)

    if as_json:
        print(json.dumps([d.to_dict() for d in all_diags], indent=2))
    else:
        for d in all_diags:
            print(d.format_line())
    has_errors = any(d.severity is Severity.ERROR for d in all_diags)
    return EXIT_FAIL if has_errors else EXIT_OK


def cmd_transpile(path: str, out: str, dialect: str) -> int:
    try:
        program, diagnostics = parse_file(path)
    except OSError as e:
        print(f"error: cannot read {path}: {e}", file=sys.stderr)
        return EXIT_ENV
    if program is not None:
        diagnostics = diagnostics + check_program(program)
    errors = [d for d in diagnostics if d.severity is Severity.ERROR]
    for d in diagnostics:
        print(d.format_line(), file=sys.stderr)
    if program is None or errors:
        return EXIT_FAIL
    text = emit_program(program, EmitOptions(dialect=_DIALECTS[dialect]))
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as e:
        print(f"error: cannot write {out}: {e}", file=sys.stderr)
        return EXIT_ENV
    return EXIT_OK


def _report_failures(report, capacity: int, label: str) -> None:
    print(f"FAIL: {label}: {len(report.failures)} failure(s)")
    failure = report.failures[0]
    minimized = minimize_failure(failure.ops, capacity)
    print(f"  first failure: {failure.message}")
    print(f"  minimized op sequence ({len(minimized)} op(s)):")
    for op in minimized:
        print(f"    {op.tag} {op.val}")


def cmd_corpus_test(capacity: int, seed: int, iters: int) -> int:
    ok = True

    report = run_randomized(capacity, seed, iters)
    label = f"randomized capacity={capacity} seed={seed} iters={iters}"
    if report.passed:
        print(
            f"ok: {label}: {report.cases_run} states, "
            f"{report.p1_checks} add-membership checks, {report.elapsed:.1f}s"
        )
    else:
        _report_failures(report, capacity, label)
        ok = False

    for cap, depth, alphabet in EXHAUSTIVE_SWEEP:
        report = exhaustive_check(cap, depth, alphabet)
        label = f"exhaustive capacity={cap} depth={depth} alphabet={alphabet}"
        if report.passed:
            print(f"ok: {label}: {report.cases_run} transitions, {report.elapsed:.1f}s")
        else:
            _report_failures(report, cap, label)
            ok = False

    return EXIT_OK if ok else EXIT_FAIL


def cmd_difftest(cc: str | None, seed: int, iters: int, capacity: int) -> int:
    compiler = find_compiler(cc, os.environ.get("RAR_CC"))
    if compiler is None:
        print(
            "error: no C++ compiler found; pass --cc or set RAR_CC",
            file=sys.stderr,
        )
        return EXIT_ENV
    try:
        report = run_differential(
            default_corpus_dir(), compiler, seed=seed, n=iters, capacity=capacity
        )
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ENV
    except DifferentialError as e:
        print(f"difftest error: {e}", file=sys.stderr)
        return EXIT_FAIL
    if report.passed:
        print(
            f"ok: difftest seed={seed} iters={iters} capacity={capacity}: "
            f"traces identical, {report.elapsed:.1f}s"
        )
        return EXIT_OK
    for failure in report.failures:
        print(f"FAIL: {failure.message}")
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run the subset checker over source files")
    p_check.add_argument("paths", nargs="+")
    p_check.add_argument("--json", action="store_true", dest="as_json")

    p_trans = sub.add_parser("transpile", help="emit Restricted Algorithmic C")
    p_trans.add_argument("path")
    p_trans.add_argument("-o", "--out", required=True)
    p_trans.add_argument("--dialect", choices=sorted(_DIALECTS), default="plain")

    p_corpus = sub.add_parser("corpus-test", help="randomized and exhaustive set properties")
    p_corpus.add_argument("--capacity", type=int, default=256)
    p_corpus.add_argument("--seed", type=int, default=1)
    p_corpus.add_argument("--iters", type=int, default=10000)

    p_diff = sub.add_parser("difftest", help="trace-compare against the compiled emitted C++")
    p_diff.add_argument("--cc", default=None)
    p_diff.add_argument("--seed", type=int, default=1)
    p_diff.add_argument("--iters", type=int, default=10000)
    p_diff.add_argument("--capacity", type=int, default=256)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        return cmd_check(args.paths, args.as_json)
    if args.command == "transpile":
        return cmd_transpile(args.path, args.out, args.dialect)
    if args.command == "corpus-test":
        return cmd_corpus_test(args.capacity, args.seed, args.iters)
    if args.command == "difftest":
        return cmd_difftest(args.cc, args.seed, args.iters, args.capacity)
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
