#!/usr/bin/env python3
"""Main entry point for the Mendelian diploid simulator."""

import argparse
import logging
import os
import sys
from typing import Any, Optional

from dotenv import load_dotenv

from .commands import COMMAND_HANDLERS
from .config import RunConfig, parse_config
from .exceptions import ConfigError, MendelError, ParameterError
from .runlog import RunLogger
from .writer import ResultWriter

logger = logging.getLogger(__name__)

# (flag, config key, type, help)
COMMON_FLAGS: list[tuple[str, str, type, str]] = [
    ("--f", "f", float, "birth rate per individual"),
    ("--D", "D", float, "natural death rate"),
    ("--delta", "delta", float, "extra death rate of aa"),
    ("--c", "c", float, "competition coefficient"),
    ("--K", "K", int, "carrying capacity"),
    ("--mu", "mu", float, "mutation probability per birth"),
    ("--eps", "eps", float, "heterozygote level ε"),
    ("--theta", "theta", float, "upper heterozygote level ϑ"),
    ("--alpha", "alpha", float, "floor exponent slack α"),
    ("--delta-fix", "delta_fix", float, "fixation threshold δ"),
    ("--rho", "rho", float, "bracket slack ϱ (default fΔ/2)"),
    ("--floor-scale", "floor_scale", float, "prefactor of the floor level"),
    ("--replicas", "replicas", int, "replicas (per K for survival)"),
    ("--t-max", "t_max", float, "time cap"),
    ("--dt", "dt", float, "sampling interval"),
    ("--workers", "workers", int, "worker processes"),
]


def build_parser() -> argparse.ArgumentParser:
    """Build the command-line parser with one subcommand per experiment."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Flat key = value config file")
    common.add_argument("--seed", type=int, help="Base seed")
    common.add_argument("--out", dest="out_dir", help="Output directory")
    for flag, dest, kind, help_text in COMMON_FLAGS:
        common.add_argument(flag, dest=dest, type=kind, help=help_text)
    common.add_argument("--dominance", choices=["dominant", "codominant"])
    common.add_argument("--record", choices=["events", "sampled", "stops"])
    common.add_argument("--Ks", help="Comma-separated carrying capacities")

    parser = argparse.ArgumentParser(
        description="Simulate and analyse the invasion of a recessive deleterious allele"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("simulate", parents=[common], help="One exact stochastic replica")
    sub.add_parser("ode", parents=[common], help="Deterministic limit and its fixed points")
    sub.add_parser("fixation", parents=[common], help="Fixation probability of the mutant")
    sub.add_parser("survival", parents=[common], help="Survival time of the recessive allele")

    decay = sub.add_parser("decay", parents=[common], help="Stochastic vs deterministic decay")
    decay.add_argument("--distance", action="store_true", default=None,
                       help="Also measure the sup-distance over the K grid")

    ladder = sub.add_parser("ladder", parents=[common], help="Level ladder of the slow phase")
    ladder.add_argument("--c-l", dest="C_l", type=float, help="Lower ladder constant")
    ladder.add_argument("--c-u", dest="C_u", type=float, help="Upper ladder constant")
    ladder.add_argument("--crossings", action="store_true", default=None,
                        help="Also time the rungs on one stochastic path")

    chain = sub.add_parser("chain", parents=[common], help="Hitting probabilities of a birth-death chain")
    chain.add_argument("--lo", type=int, help="Lower end of the chain")
    chain.add_argument("--hi", type=int, help="Upper end of the chain")
    chain.add_argument("--c0", type=float, help="Drift constant of the up-probabilities")
    chain.add_argument("--reflect-at-lo", dest="reflect_at_lo", action="store_true", default=None,
                       help="Reflect at lo instead of absorbing")

    window = sub.add_parser("window", parents=[common], help="Admissible window of the mutation rate")
    window.add_argument("--timing", action="store_true", default=None,
                        help="Also time the first mutation on stochastic paths")
    return parser


def dispatch(cfg: RunConfig) -> int:
    """Run one command and write its outputs.

    Returns:
        Exit status, 0 on success and 1 on a handled error
    """
    run_log = RunLogger(cfg.out_dir)
    config = cfg.model_dump(mode="json")
    run_log.run_started(cfg.command, config)
    try:
        writer = ResultWriter(cfg.out_dir)
        result, summary = COMMAND_HANDLERS[cfg.command](cfg, writer, config)
        for path in result.all_paths:
            run_log.output_written(cfg.command, path)
            print(f"Output written to: {path}")
        run_log.run_finished(cfg.command, summary)
        for key, value in summary.items():
            print(f"{key}: {value}")
        return 0
    except MendelError as e:
        logger.error(f"{cfg.command} failed: {e}")
        run_log.run_failed(cfg.command, str(e))
        print(f"Error: {e}", file=sys.stderr)
        return 1
    finally:
        run_log.close()


def main(argv: Optional[list[str]] = None) -> int:
    """Main function."""
    load_dotenv()
    logging.basicConfig(
        level=os.getenv("LOG_LEVEL", "INFO").upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    args = build_parser().parse_args(argv)
    overrides: dict[str, Any] = vars(args)
    path = overrides.pop("config")
    try:
        cfg = parse_config(path, overrides)
    except (ConfigError, ParameterError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1

    logger.info(f"Running {cfg.command} (K={cfg.params.K}, seed={cfg.seed})")
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
