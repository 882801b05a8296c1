"""Command-line interface: preprocess, fit, select, analyze, simulate and verify."""

from src.cli.commands import (
    cmd_analyze,
    cmd_fit,
    cmd_preprocess,
    cmd_select,
    cmd_simulate,
    cmd_verify,
)
from src.cli.main import build_parser, main

__all__ = [
    "build_parser",
    "cmd_analyze",
    "cmd_fit",
    "cmd_preprocess",
    "cmd_select",
    "cmd_simulate",
    "cmd_verify",
    "main",
]
