"""Command line entry point.

Exit codes: 0 success, 1 selfcheck failure, 2 configuration error,
3 numerical singularity or non-dispersive evaluation, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .config import bundled_scenarios, parse_scenario, resolve_scenario
from .errors import (
    ConfigError,
    InvalidArgumentError,
    NonDispersiveError,
    NoWorkingPointError,
    SingularEvaluationError,
)

EXIT_OK, EXIT_SELFCHECK, EXIT_CONFIG, EXIT_SINGULAR, EXIT_IO = 0, 1, 2, 3, 4


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qudit-readout", description="Dispersive readout of molecular spin qudits")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "run the task of a scenario"),
                        ("shifts", "per-state dispersive shifts of a scenario"),
                        ("optimize", "search the static field for the best shift separation")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("config", help="scenario YAML file or bundled scenario name")
        sp.add_argument("-o", "--outdir", default=".", help="output directory (default: current)")
        if name == "run":
            svg = sp.add_mutually_exclusive_group()
            svg.add_argument("--svg", dest="svg", action="store_true", default=None, help="also write an SVG plot")
            svg.add_argument("--no-svg", dest="svg", action="store_false", help="skip the SVG plot")
        if name == "shifts":
            sp.add_argument("--at-omega", action="store_true",
                            help="complex shifts at the cavity frequency including eta")
    sub.add_parser("scenarios", help="list bundled scenarios")
    sc = sub.add_parser("selfcheck", help="run the invariant suite")
    sc.add_argument("-q", "--quiet", action="store_true")
    return p


def _cmd_scenarios() -> int:
    for name, text in bundled_scenarios().items():
        scn = parse_scenario(text, f"<bundled:{name}>")
        print(f"{name:20s} {scn.task:12s} {scn.description}")
    return EXIT_OK


def _cmd_selfcheck(quiet: bool) -> int:
    from .selfcheck import run_selfcheck

    results = run_selfcheck()
    for r in results:
        if not quiet or not r.passed:
            print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name:28s} {r.seconds:7.2f} s  {r.detail}")
    total = sum(r.seconds for r in results)
    ok = all(r.passed for r in results)
    print(f"selfcheck {'passed' if ok else 'FAILED'} in {total:.1f} s")
    return EXIT_OK if ok else EXIT_SELFCHECK


def _cmd_task(args) -> int:
    from .runner import run_optimize, run_scenario, run_shifts

    scn = resolve_scenario(args.config)
    outdir = Path(args.outdir)
    operation = {"run": scn.task, "shifts": "shifts", "optimize": "optimize"}[args.command]
    try:
        if args.command == "run":
            res = run_scenario(scn, outdir, svg=args.svg)
        elif args.command == "shifts":
            res = run_shifts(scn, outdir, at_omega=args.at_omega)
        else:
            res = run_optimize(scn, outdir)
    except (SingularEvaluationError, NonDispersiveError, NoWorkingPointError) as exc:
        print(f"error: {operation} failed: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except OSError as exc:
        print(f"error: cannot write {operation} output: {exc}", file=sys.stderr)
        return EXIT_IO
    if res.summary:
        print(res.summary)
    for f in res.files:
        print(f"wrote {f}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    with warnings.catch_warnings():
        warnings.showwarning = _show_warning
        try:
            if args.command == "scenarios":
                return _cmd_scenarios()
            if args.command == "selfcheck":
                return _cmd_selfcheck(args.quiet)
            return _cmd_task(args)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except InvalidArgumentError as exc:
            print(f"error: invalid scenario: {exc}", file=sys.stderr)
            return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
