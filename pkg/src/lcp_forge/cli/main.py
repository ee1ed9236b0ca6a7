"""``lcp-forge`` entry point."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from ..errors import InvalidInput, LcpError
from .report import Check, RunReport, digest
from .runners import CASE_NAMES, load_case, run_case, run_group, run_matrix, run_metric

EXIT_INVALID = 2


def _parser():
    p = argparse.ArgumentParser(prog="lcp-forge", description="Check LCP admissible data and metrics.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("check-matrix", "semi-simplicity, blocks, modulus classes, flat subspace, density"),
                        ("check-group", "admissibility hypotheses, relations and splitting"),
                        ("metric", "equivariance, frames, brackets and averaging")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--input", required=True, metavar="PATH")
        _common(sp)
    sp = sub.add_parser("reproduce-paper", help="run the built-in worked examples")
    sp.add_argument("--case", metavar="NAME", help="one of: " + ", ".join(CASE_NAMES))
    _common(sp)
    return p


def _common(sp):
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    sp.set_defaults(fmt="text")
    sp.add_argument("--tolerance", metavar="RAT", help="override numeric residual tolerances")
    sp.add_argument("--seed", type=int, metavar="N", help="seed for sample points")


def _tolerance(text):
    if text is None:
        return None
    try:
        t = float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        try:
            t = float(text)
        except ValueError:
            raise InvalidInput(f"bad tolerance {text!r}") from None
    if not t > 0:
        raise InvalidInput("tolerance must be positive")
    return t


def _read_input(path):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InvalidInput("input must be a JSON object")
    return data, raw


def _guarded(report, name, fn):
    """Run fn; mathematical errors outside a check become a FAIL record."""
    try:
        fn()
    except InvalidInput:
        raise
    except LcpError as exc:
        report.add(Check(name, "FAIL", {"error": type(exc).__name__, "reason": str(exc)}))


def execute(args) -> RunReport:
    opts = {"tolerance": _tolerance(args.tolerance), "seed": args.seed}
    if args.command == "reproduce-paper":
        names = [args.case] if args.case else list(CASE_NAMES)
        cases = [(n, *load_case(n)) for n in names]
        report = RunReport(args.command, digest(b"".join(raw for _, _, raw in cases)))
        for name, data, _ in sorted(cases, key=lambda t: t[0]):
            _guarded(report, name, lambda: run_case(name, data, report, opts))
        return report
    data, raw = _read_input(args.input)
    report = RunReport(args.command, digest(raw))
    runner = {"check-matrix": run_matrix, "check-group": run_group, "metric": run_metric}[args.command]
    _guarded(report, args.command, lambda: runner(data, report, "", opts))
    return report


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else 0
    try:
        report = execute(args)
    except (InvalidInput, KeyError, TypeError, ValueError, IndexError) as exc:
        msg = str(exc) if isinstance(exc, InvalidInput) else f"malformed input: {exc!r}"
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INVALID
    print(report.dumps() if args.fmt == "json" else report.text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
