"""Command line entry point.

    efftc run <scenario.json|builtin> [--grid N] [--epsilon E] [--delta D]
              [--modulus L] [--samples S] [--out report.json] [--csv rows.csv]
    efftc table <dir> [--csv table.csv]
    efftc list-builtins

Exit codes: 0 all reports consistent and expectations met; 1 contradiction,
refutation or expectation miss; 2 unparseable input.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import ContradictionError
from .scenarios import BUILTINS, emit_table, format_table, run_scenario, table_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="efftc")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and emit its reports")
    run.add_argument("scenario", help="path to a scenario JSON or a builtin name")
    run.add_argument("--grid", type=int, default=None)
    run.add_argument("--epsilon", type=float, default=None)
    run.add_argument("--delta", type=float, default=None)
    run.add_argument("--modulus", type=float, default=None)
    run.add_argument("--samples", type=int, default=None)
    run.add_argument("--out", default=None, help="write the JSON report here")
    run.add_argument("--csv", default=None, help="write report rows as CSV")

    table = sub.add_parser("table", help="assemble the sphere table from reports")
    table.add_argument("dir", help="directory holding scenario report JSONs")
    table.add_argument("--csv", default=None)

    sub.add_parser("list-builtins", help="list builtin scenario names")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list-builtins":
        for name in sorted(BUILTINS):
            print(name)
        return 0

    if args.command == "run":
        overrides = {}
        for key in ("grid", "epsilon", "delta", "modulus", "samples"):
            value = getattr(args, key)
            if value is not None:
                overrides[key] = value
        try:
            result = run_scenario(args.scenario, overrides)
        except (json.JSONDecodeError, FileNotFoundError, KeyError, ValueError) as exc:
            print(f"error: cannot load scenario: {exc}", file=sys.stderr)
            return 2
        except ContradictionError as exc:
            print(f"contradiction: {exc}", file=sys.stderr)
            return 1
        payload = result.to_json()
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        else:
            print(payload, end="")
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write("\n".join(result.csv_rows()) + "\n")
        if not result.ok:
            for check in result.checks:
                if not check["ok"]:
                    print(f"failed check: {check}", file=sys.stderr)
            for exp in result.expected_results:
                if not exp["ok"]:
                    print(f"missed expectation: {exp}", file=sys.stderr)
            return 1
        return 0

    if args.command == "table":
        rows, missing = emit_table(args.dir)
        if missing:
            print(f"missing scenario reports: {sorted(set(missing))}",
                  file=sys.stderr)
            return 1
        print(format_table(rows))
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(table_csv(rows))
        return 0 if all(r["match"] for r in rows) else 1

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
