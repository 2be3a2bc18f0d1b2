"""
Point d'entrée en ligne de commande d'equisym

    python -m src.main run --experiment <nom> --config <fichier> [--seed N] [--out DIR] [--n N] [--d D]
    python -m src.main list
"""

import argparse
import sys
from typing import List, Optional

from . import __version__
from .core.config import settings
from .core.exceptions import EquisymError
from .core.logging import setup_logging
from .experiments import ExperimentConfig, ExperimentManager

EXIT_OK = 0
EXIT_ASSERTION_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equisym",
        description="Symmetric, equivariant and anti-symmetric function representations: experiment runner",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="override EQUISYM_LOGGING__LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run one experiment suite and write CSV/JSON reports")
    run.add_argument("--experiment", required=True, help="suite name (see 'list')")
    run.add_argument("--config", default=None, help="flat JSON object mirroring the experiment config")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--out", default=None, help="report directory")
    run.add_argument("--n", type=int, default=None, help="particle count")
    run.add_argument("--d", type=int, default=None, help="particle dimension")

    commands.add_parser("list", help="list available suites")
    return parser


def cmd_list(manager: ExperimentManager) -> int:
    for info in manager.list_experiments():
        flags = []
        if info.requires_seed:
            flags.append("needs --seed")
        if info.oracle:
            flags.append(f"n <= {settings.oracle.max_particles}")
        suffix = f" [{', '.join(flags)}]" if flags else ""
        print(f"{info.name:<20} {info.description}{suffix}")
    return EXIT_OK


def cmd_run(manager: ExperimentManager, args: argparse.Namespace) -> int:
    config = ExperimentConfig.load(
        args.config,
        experiment=args.experiment,
        seed=args.seed,
        out=args.out,
        n=args.n,
        d=args.d,
    )
    result, paths = manager.run(config)
    for check in result.checks:
        status = "ok" if check.passed else ("FAIL" if check.enforced else "warn")
        print(f"{status:<5} {check.name}: value={check.value} threshold={check.threshold}")
    if paths is not None:
        print(f"reports: {paths[0]} {paths[1]}")
    return EXIT_OK if result.passed else EXIT_ASSERTION_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.log_level)
    manager = ExperimentManager()
    try:
        if args.command == "list":
            return cmd_list(manager)
        return cmd_run(manager, args)
    except EquisymError as e:
        manager.log_error(e, command=args.command)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
