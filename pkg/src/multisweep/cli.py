"""Command-line interface.

Subcommands run either the full pipeline (run) or a single stage against an
existing output directory (estimate, partition, plan, simulate, compare).
Exit codes: 0 success, 2 config error, 3 input parse error, 4 algorithm
failure, 5 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import (
    ArtifactError,
    ConfigError,
    GridParseError,
    LogParseError,
    MultisweepError,
    StageError,
)
from .pipeline import STAGES, run_pipeline, run_stage

_STAGE_NAMES = tuple(name for name, _ in STAGES)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_ALGORITHM = 4
EXIT_IO = 5


def _exit_code(err: Exception) -> int:
    if isinstance(err, ConfigError):
        return EXIT_CONFIG
    if isinstance(err, (GridParseError, LogParseError, ArtifactError)):
        return EXIT_PARSE
    if isinstance(err, OSError):
        return EXIT_IO
    if isinstance(err, MultisweepError):
        return EXIT_ALGORITHM
    raise err


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multisweep",
        description="Dirt-aware multi-robot cleaning: estimate, partition, plan, simulate, compare.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _STAGE_NAMES + ("run",):
        p = sub.add_parser(name, help=f"run the {name} stage" if name != "run" else "run all stages")
        p.add_argument("--config", required=True, help="key=value scenario file")
        p.add_argument("--robots", type=int, help="override the robot count")
        p.add_argument("--seed", type=int, help="override the simulation seed")
        p.add_argument("--out", help="override the output directory")
        p.add_argument(
            "--fixed-scale",
            action="store_true",
            default=None,
            help="normalize dirt renders against the top dwell bucket instead of the map maximum",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        "robots": args.robots,
        "seed": args.seed,
        "out": args.out,
        "fixed_scale": args.fixed_scale,
    }
    try:
        cfg = load_config(args.config, overrides)
    except (ConfigError, OSError) as e:
        print(f"multisweep: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG if isinstance(e, ConfigError) else EXIT_IO

    try:
        if args.command == "run":
            run_pipeline(cfg)
        else:
            run_stage(cfg, args.command)
    except StageError as e:
        print(f"multisweep: error in stage {e.stage}: {e.cause}", file=sys.stderr)
        return _exit_code(e.cause)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
