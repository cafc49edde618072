"""Command line interface.

    rydephase run <config.json> [--out DIR] [--threads K] [--seed S]
    rydephase scenarios

Exit codes: 0 success, 2 validation error, 3 numerical failure.  The
default output directory is $RYDEPHASE_OUT, overridden by --out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import builtin_scenarios, load_config
from .errors import ConfigError, QuadratureError
from .runner import run

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rydephase", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment configuration")
    p_run.add_argument("config", help="path to a JSON experiment configuration")
    p_run.add_argument("--out", default=None, help="output directory (default: $RYDEPHASE_OUT or .)")
    p_run.add_argument("--threads", type=int, default=1, help="worker threads (outputs are identical for any count)")
    p_run.add_argument("--seed", type=int, default=None, help="override the config RNG seed")

    sub.add_parser("scenarios", help="list built-in scenarios with their defaults")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "scenarios":
        print(json.dumps(builtin_scenarios(), indent=2))
        return EXIT_OK

    out_dir = args.out or os.environ.get("RYDEPHASE_OUT") or "."
    try:
        config = load_config(args.config, seed_override=args.seed)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        summary = run(config, out_dir, threads=max(1, args.threads))
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in summary.get("files", []):
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
