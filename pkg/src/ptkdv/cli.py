"""Command-line entry point: `ptkdv run <scenario>` and `ptkdv list`."""

from __future__ import annotations

import argparse
import os
import sys

from .errors import PtkdvError
from .scenarios import Scenario, list_scenarios, run_scenario


def _parse_value(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _parse_overrides(pairs):
    overrides = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ValueError(f"override {pair!r} is not of the form key=value")
        key, _, value = pair.partition("=")
        overrides[key.strip()] = _parse_value(value.strip())
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptkdv",
        description="Scenario runner for the PT-symmetric KdV solver suite.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write its artifacts")
    run.add_argument("scenario", help="scenario name (see `ptkdv list`)")
    run.add_argument("--set", dest="overrides", action="append", metavar="KEY=VALUE",
                     help="override a whitelisted scenario parameter")
    run.add_argument("--out", dest="out", default=None,
                     help="output root (default: $PTKDV_OUT or ./ptkdv-out)")
    run.add_argument("--parallel", action="store_true",
                     help="solve independent profiles concurrently")

    sub.add_parser("list", help="list scenarios and the figure each reproduces")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "list":
        print(list_scenarios())
        return 0

    out_root = args.out or os.environ.get("PTKDV_OUT", "ptkdv-out")
    try:
        overrides = _parse_overrides(args.overrides)
        scenario = Scenario(args.scenario, overrides, out_root)
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2

    try:
        summary = run_scenario(scenario, parallel=args.parallel)
    except PtkdvError as exc:
        print(f"numerical failure in {args.scenario}: {exc}", file=sys.stderr)
        return 1

    width = max((len(c["name"]) for c in summary["checks"]), default=10)
    for c in summary["checks"]:
        status = "pass" if c["passed"] else "FAIL"
        value = c["value"]
        shown = f"{value:.6g}" if isinstance(value, (int, float)) and value is not None else "-"
        print(f"[{status}] {c['name']:<{width}s} value={shown:<12s} want {c['constraint']}")
    for note in summary["notes"]:
        print(f"note: {note}")
    print(f"scenario {args.scenario}: {'PASSED' if summary['passed'] else 'FAILED'}")
    return 0 if summary["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
