import argparse
import sys
from pathlib import Path

from cli.commands import (
    EXIT_ERROR,
    SCENARIO_REORIENT,
    SCENARIOS,
    cmd_analyze,
    cmd_plan,
    cmd_report,
    cmd_simulate,
)
from utils.config import config_hash, get_config
from utils.logging import get_logger
from utils.settings import OUTPUT_DIR

logger = get_logger(__name__)

TASK_ANALYZE = "analyze"
TASK_PLAN = "plan"
TASK_SIMULATE = "simulate"
TASK_REPORT = "report"


def build_parser() -> argparse.ArgumentParser:
    """Command-line interface with one subcommand per task."""
    parser = argparse.ArgumentParser(description="Tensegrity aerial vehicle design and reorientation toolkit.")
    parser.add_argument("task", choices=[TASK_ANALYZE, TASK_PLAN, TASK_SIMULATE, TASK_REPORT])
    parser.add_argument("--config", type=Path, help="run configuration (JSON)")
    parser.add_argument("--seed", type=int, help="overrides simulation.seed")
    parser.add_argument("--start-face", type=int, choices=range(1, 21), metavar="K", help="start face 1..20")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--scenario", choices=SCENARIOS, default=SCENARIO_REORIENT)
    parser.add_argument("--trials", type=int, default=100, help="Monte-Carlo trials")
    parser.add_argument("--cross-check", action="store_true", help="compare the sweep with the truss solve")
    return parser


def main(argv: list[str] | None = None) -> int:
    """Run the requested task and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        config = get_config(args.config)
        if args.seed is not None:
            simulation = config.simulation.model_copy(update={"seed": args.seed})
            config = config.model_copy(update={"simulation": simulation})
        out = args.out or Path(config.output_dir or OUTPUT_DIR)
        digest = config_hash(config)
        logger.info(f"Running {args.task} with config hash {digest[:12]}, writing to {out}")

        if args.task == TASK_ANALYZE:
            return cmd_analyze(config, out, digest, args.cross_check)
        if args.task == TASK_PLAN:
            return cmd_plan(config, out, digest, args.start_face)
        if args.task == TASK_SIMULATE:
            return cmd_simulate(config, out, digest, args.scenario, args.start_face, args.trials)
        return cmd_report(config, out, digest)
    except Exception:
        logger.exception(f"Task {args.task} failed")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
