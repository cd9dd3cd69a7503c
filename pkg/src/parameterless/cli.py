"""Command-line entry point: ``parameterless PEAParameters.txt``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .errors import ConfigurationError
from .harness import format_summary, parse_config, run_batch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parameterless",
        description="Run parameter-less evolutionary algorithm batches.",
    )
    parser.add_argument("parameters", help="run parameters file (key = value lines)")
    parser.add_argument("--out", help="output directory (overrides outputDir)")
    parser.add_argument("--runs", type=int, help="number of runs (overrides numRuns)")
    parser.add_argument("--seed", type=int, help="base seed (overrides seed)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = parse_config(args.parameters)
        overrides = {}
        if args.out is not None:
            overrides["output_dir"] = args.out
        if args.runs is not None:
            if args.runs < 1:
                raise ConfigurationError("--runs must be >= 1")
            overrides["num_runs"] = args.runs
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigurationError("--seed must be >= 0")
            overrides["seed"] = args.seed
        config = replace(config, **overrides)
        if not config.stopper.any_set() and not config.target_is_optimum:
            raise ConfigurationError(
                "no stop criterion set; the race would run forever "
                "(set targetFitness, maxEvaluations, maxLadderIndex, maxWallClock "
                "or maxStepsOfLargest)"
            )
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        stats, summary, (log_path, stats_path) = run_batch(config, jobs=max(1, args.jobs))
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return 3

    for line in format_summary(summary):
        print(line)
    print(f"log\t{log_path}")
    print(f"stats\t{stats_path}")
    return 0
