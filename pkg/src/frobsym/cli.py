"""Command line front end.

    frobsym check <spec-file> [--tol-scale F] [--fd-step H] [--seed N]
                              [--report human|machine] [--out PATH]
    frobsym catalog                 list the built-in entries
    frobsym catalog <name> [...]    run one entry (same flags as check)
    frobsym catalog all   [...]     run every entry as a self-test

Exit status: 0 iff all non-skipped checks pass.  ``catalog all`` instead
compares each row against the entry's documented outcome, so the
deliberately-broken fixtures count as healthy when they fail as documented.
FROBSYM_THREADS caps check concurrency inside one battery.
"""

from __future__ import annotations

import argparse
import sys

from .battery import (
    RunOptions,
    builtin_catalog,
    emit_report,
    load_manifold_spec,
    run_battery,
)
from .errors import FrobsymError


def _add_run_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--tol-scale", type=float, default=1.0,
                        help="multiply every tolerance by this factor")
    parser.add_argument("--fd-step", type=float, default=None,
                        help="override the finite-difference step scale")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the spec seed")
    parser.add_argument("--report", choices=("human", "machine"), default="human")
    parser.add_argument("--out", default=None, help="write the report here")


def _options(args) -> RunOptions:
    return RunOptions(tol_scale=args.tol_scale, fd_step=args.fd_step, seed=args.seed)


def _deliver(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_check(args) -> int:
    spec = load_manifold_spec(args.spec_file)
    report = run_battery(spec, _options(args))
    _deliver(emit_report(report, args.report), args)
    return 0 if report.all_passed() else 1


def _cmd_catalog(args) -> int:
    catalog = builtin_catalog()
    if args.name is None:
        width = max(len(n) for n in catalog)
        for name, entry in catalog.items():
            expected = ("fails: " + ", ".join(sorted(entry.expect_fail))
                        if entry.expect_fail else "all pass")
            print(f"{name:<{width}}  kind={entry.spec.kind:<19} "
                  f"checks={len(entry.spec.checks)}  expected: {expected}")
        return 0

    if args.name == "all":
        texts = []
        healthy = True
        for name, entry in catalog.items():
            report = run_battery(entry.spec, _options(args))
            texts.append(emit_report(report, args.report))
            healthy = healthy and entry.matches_expectation(report)
        _deliver(("" if args.report == "machine" else "\n").join(texts), args)
        return 0 if healthy else 1

    if args.name not in catalog:
        print(f"unknown catalog entry {args.name!r}; run 'frobsym catalog' to list",
              file=sys.stderr)
        return 2
    entry = catalog[args.name]
    if args.dump_spec:
        _deliver(entry.spec.canonical_text() + "\n", args)
        return 0
    report = run_battery(entry.spec, _options(args))
    _deliver(emit_report(report, args.report), args)
    return 0 if report.all_passed() else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobsym",
                                     description="residual verification batteries")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the checks of a spec file")
    check.add_argument("spec_file")
    _add_run_flags(check)
    check.set_defaults(handler=_cmd_check)

    catalog = sub.add_parser("catalog", help="list or run built-in entries")
    catalog.add_argument("name", nargs="?", default=None,
                         help="entry name, or 'all' for the self-test battery")
    catalog.add_argument("--dump-spec", action="store_true",
                         help="print the entry as spec text instead of running it")
    _add_run_flags(catalog)
    catalog.set_defaults(handler=_cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except FrobsymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
