"""Command line entry point: ``oef <command> --config <path> [options]``."""

import argparse
import logging
import sys
from pathlib import Path

from . import experiments
from .config import default_config, load_config
from .errors import ConfigError, DomainError, NumericError

log = logging.getLogger("oef")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

COMMANDS = ("error-curve", "sweep", "bias-study", "solve", "simulate")


def build_parser():
    parser = argparse.ArgumentParser(prog="oef", description="Forum incentive planning experiments.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON configuration file (defaults to the built-in parameters)")
    parser.add_argument("--out", help="output file; stdout when omitted")
    parser.add_argument("--mode", choices=("steady", "transient"))
    parser.add_argument("--method", choices=("milp", "pure"))
    parser.add_argument("--seed", type=int)
    parser.add_argument("--format", choices=("csv", "json"), help="solve only; json by default")
    parser.add_argument("--plot", action="store_true", help="also render a PNG figure next to --out")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def run(command, cfg, fmt=None):
    """Run one command; returns ``(text, table)`` where ``table`` feeds the figure."""
    if command == "error-curve":
        table = experiments.error_curve(cfg)
    elif command == "sweep":
        table = experiments.sweep(cfg)
    elif command == "bias-study":
        table = experiments.bias_study(cfg)
    elif command == "solve":
        result = experiments.solve_game(cfg)
        table = experiments.solution_table(result)
        if fmt != "csv":
            return experiments.solution_json(result), table
    elif command == "simulate":
        table = experiments.simulate(cfg)
    else:
        raise ValueError(command)
    return table.to_csv(), table


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config) if args.config else default_config()
        cfg = cfg.with_overrides(mode=args.mode, method=args.method, seed=args.seed)
        if args.plot and not args.out:
            raise ConfigError("--plot needs --out to place the figure", "$")
        text, table = run(args.command, cfg, args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, DomainError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    if args.out:
        out = Path(args.out)
        out.write_text(text, encoding="utf-8", newline="\n")
        log.info("wrote %s", out)
        if args.plot:
            from .plotting import render

            fig_path = render(args.command, table, out.with_suffix(".png"))
            log.info("wrote %s", fig_path)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
