"""Command-line entry point: ``annealstats <subcommand> --config FILE [--set key=value ...]``.

Exit status is 0 on success, 1 for configuration errors and 2 when a solver
reports that a task exceeds its capability (other tasks still run).
"""

from __future__ import annotations

import argparse
import logging
import sys

from .harness import ConfigError, ExperimentConfig, parse_overrides, run_experiment
from .model import CapabilityError

EXIT_OK, EXIT_CONFIG, EXIT_CAPABILITY = 0, 1, 2

SUBCOMMANDS = {
    "enumerate": ("enumerate", "list all ground states of each instance"),
    "spectrum": ("spectrum", "instantaneous spectrum of H(s) on an s grid"),
    "exact-qa": ("exact_qa", "exact Schroedinger-equation annealing"),
    "exact-sa": ("exact_sa", "exact master-equation annealing"),
    "qmc": ("qmc", "path-integral Monte Carlo quantum annealing"),
    "sa": ("sa", "simulated annealing"),
    "analyze": ("analyze", "aggregate run CSVs and fit power laws"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="annealstats", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, text) in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        overrides = {"method.name": SUBCOMMANDS[args.command][0], **parse_overrides(args.set)}
        if overrides["method.name"] != SUBCOMMANDS[args.command][0]:
            raise ConfigError("method.name", f"conflicts with subcommand {args.command!r}")
        cfg = ExperimentConfig.load(args.config, overrides)
        result = run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    for path in result.files:
        print(path)
    if result.errors:
        for e in result.errors:
            print(f"capability error: {e}", file=sys.stderr)
        return EXIT_CAPABILITY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
