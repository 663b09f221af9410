"""Command-line entry point: run experiment grids, rebuild reports, export
suite manifests.

Exit codes: 0 on success, 2 on config errors, 3 on budget misconfiguration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .benchfns import make_suite, suite_manifest
from .core import InsufficientBudget
from .harness import ConfigError, load_config, report_from_dir, run_grid

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3

OUTPUT_DIR_ENV = "MCDOPT_OUTPUT_DIR"


def _cmd_run(args) -> int:
    config = load_config(args.config)
    override = os.environ.get(OUTPUT_DIR_ENV)
    if override:
        config.output_dir = override
    report = run_grid(config)
    print(f"wrote {report.output_dir}")
    for baseline, (wins, ties, losses) in sorted(report.wtl.items()):
        print(f"mcd vs {baseline}: {wins} wins, {ties} ties, {losses} losses")
    return EXIT_OK


def _cmd_report(args) -> int:
    report = report_from_dir(args.in_dir)
    print(f"rebuilt {report.summary_path} and {len(report.plot_paths)} charts")
    return EXIT_OK


def _cmd_suite(args) -> int:
    if args.dim < 2:
        raise ConfigError("suite dim must be at least 2")
    manifest = suite_manifest(make_suite(args.dim, args.seed))
    with open(args.manifest, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    print(f"wrote {args.manifest}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mcd-harness",
        description="budgeted black-box optimization experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="execute the grid described by a config file")
    run_parser.add_argument("--config", required=True, help="path to a key = value config file")
    run_parser.set_defaults(func=_cmd_run)

    report_parser = sub.add_parser(
        "report", help="recompute summary and charts from an existing results directory")
    report_parser.add_argument("--in", dest="in_dir", required=True,
                               help="results directory written by a previous run")
    report_parser.set_defaults(func=_cmd_report)

    suite_parser = sub.add_parser("suite", help="write the benchmark suite manifest")
    suite_parser.add_argument("--dim", type=int, required=True)
    suite_parser.add_argument("--seed", type=int, default=0)
    suite_parser.add_argument("--manifest", required=True, help="output JSON path")
    suite_parser.set_defaults(func=_cmd_suite)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InsufficientBudget as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
