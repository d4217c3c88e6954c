"""Command-line entry point.

    cohcool run scenario.json [--out DIR] [--seed N] [--verbatim-sm] [--tc-verbatim]

Exit codes: 0 success, 2 bad scenario or parameters, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import InvalidParameter, NumericalError, ScenarioError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohcool",
        description="Coherent-cooling bounds, simulations, and resource comparisons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a scenario file; writes CSV, manifest, and figure")
    run.add_argument("scenario", help="path to a scenario JSON file")
    run.add_argument("--out", default=".", help="output directory (default: current directory)")
    run.add_argument("--seed", type=int, default=None, help="override the sampling seed")
    run.add_argument(
        "--verbatim-sm",
        action="store_true",
        help="use the printed closed-form propagator variants instead of the corrected ones",
    )
    run.add_argument(
        "--tc-verbatim",
        action="store_true",
        help="use the printed cold-temperature convention in efficiency ratios",
    )
    return parser


def main(argv=None) -> int:
    # Imported lazily so `--help` stays fast and import errors surface per-run.
    from .scenarios import RunOptions, run_scenario_file

    args = build_parser().parse_args(argv)
    options = RunOptions(
        seed=args.seed, verbatim_sm=args.verbatim_sm, tc_verbatim=args.tc_verbatim
    )
    try:
        written = run_scenario_file(args.scenario, args.out, options)
    except (ScenarioError, InvalidParameter) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
