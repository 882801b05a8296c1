"""Command-line entry point.

    scitopics <command> --config PATH [--seed N] [--workers N] [--out DIR]
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from src.cli.commands import (
    cmd_analyze,
    cmd_fit,
    cmd_preprocess,
    cmd_select,
    cmd_simulate,
    cmd_verify,
)
from src.common.config import LOG_FORMAT, LogLevel, RunConfig, load_run_config
from src.common.errors import NumericalError, ScitopicsError

logger = logging.getLogger(__name__)

COMMANDS: Dict[str, Callable[[RunConfig], Path]] = {
    "preprocess": cmd_preprocess,
    "fit": cmd_fit,
    "select": cmd_select,
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
}

EXIT_OK = 0
EXIT_BAD_INPUT = 3
EXIT_NUMERICAL = NumericalError.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scitopics", description="Structural topic models for article corpora"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    levels = [lvl.value for lvl in LogLevel]

    helps = {
        "preprocess": "Build vocabulary, document-term matrix and covariate design",
        "fit": "Fit the topic model on the preprocessed corpus",
        "select": "Sweep topic counts and report coherence and exclusivity",
        "analyze": "Write prevalence tables, labels, networks and effect models",
        "simulate": "Draw a synthetic corpus with known parameters",
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument(
            "--config", type=str, default=None, help="YAML run configuration"
        )
        sub.add_argument(
            "--seed", type=int, default=None, help="Random seed (overrides the config)"
        )
        sub.add_argument(
            "--workers",
            type=int,
            default=None,
            help="Worker processes (overrides the config)",
        )
        sub.add_argument(
            "--out",
            type=str,
            default=None,
            help="Output directory (overrides the config)",
        )
        sub.add_argument(
            "--log-level", type=str, default=None, choices=levels, help="Log level"
        )

    verify = subparsers.add_parser(
        "verify", help="Re-check manifests and embedded config hashes"
    )
    verify.add_argument(
        "--out", type=str, default="out", help="Output directory to verify"
    )
    verify.add_argument(
        "--log-level", type=str, default=None, choices=levels, help="Log level"
    )
    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT, force=True)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand.

    Returns:
        int: 0 on success, 2 for configuration errors, 3 for missing or invalid
            stage inputs, 4 for numerical failures.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.log_level or LogLevel.INFO.value)

    if args.command == "verify":
        results = cmd_verify(Path(args.out))
        failed = [stage for stage, problems in results.items() if problems]
        return EXIT_BAD_INPUT if failed or not results else EXIT_OK

    try:
        overrides = {
            "seed": args.seed,
            "workers": args.workers,
            "log_level": args.log_level,
        }
        if args.out is not None:
            overrides["paths"] = {"output_dir": args.out}
        config = load_run_config(args.config, **overrides)
        if args.log_level is None:
            _configure_logging(config.log_level.value)
        path = COMMANDS[args.command](config)
        logger.info(f"[{args.command}] done: {path}")
        return EXIT_OK
    except ScitopicsError as e:
        logger.error(f"[{args.command}] {type(e).__name__}: {e}")
        return e.exit_code
    # LinAlgError subclasses ValueError
    except np.linalg.LinAlgError as e:
        logger.error(f"[{args.command}] numerical failure: {e}")
        return EXIT_NUMERICAL
    except ValueError as e:
        logger.error(f"[{args.command}] invalid input: {e}")
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
