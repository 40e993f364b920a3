"""
tensorforge command-line front end
Parses flags into a RunConfig, runs the subcommand and writes the report
"""

import argparse
import json
import logging
import os
import sys
from typing import List, Optional

# Add src directory to Python path when running as standalone script
if __name__ == "__main__":
    current_dir = os.path.dirname(os.path.abspath(__file__))
    src_dir = os.path.dirname(current_dir)
    if src_dir not in sys.path:
        sys.path.insert(0, src_dir)

from config.forge_config import (
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    LOG_FORMAT,
    LOG_LEVEL,
)
from api.report_writer import render
from core.forge_runner import TensorForge
from models.errors import ConfigError, ForgeError, VerificationFailure
from models.run_config import SUBCOMMANDS, RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# flag name -> (type, help); flags shared by every subcommand are added separately
OPTION_FLAGS = {
    "step": (float, "μ grid spacing"),
    "refine": (int, "local refinement levels after the grid"),
    "mu": (str, "μ as an exact rational p/q"),
    "m_max": (int, "largest m to scan or sample"),
    "k_max": (int, "largest k to try per m"),
    "r": (int, "number of summands / components"),
    "theta": (int, "θ, length of the π maps"),
    "sigma": (int, "σ, digit base of the Φ family"),
    "trials": (int, "Terracini sampling trials"),
    "m": (int, "tensor side length"),
    "samples": (int, "number of random samples"),
    "v": (int, "clone factor"),
    "ua": (str, "subspace JSON for mode A"),
    "ub": (str, "subspace JSON for mode B"),
    "uc": (str, "subspace JSON for mode C"),
    "decomposition": (str, "decomposition JSON to transfer onto the clone"),
}
SWITCH_FLAGS = {
    "exact_check": "re-check the μ argmin and 2μ − 1 > 0 exactly",
    "verify": "run the structural verification of the Φ family",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensorforge",
        description="Exact-arithmetic toolkit for tensor rank additivity counterexamples",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--input", dest="input_path")
    parser.add_argument("--output", dest="output_path")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    parser.add_argument("--workers", type=int, default=DEFAULT_WORKERS)
    parser.add_argument("--format", dest="report_format", choices=("json", "csv"), default="json")
    parser.add_argument("--timing", action="store_true", help="keep wall-clock fields in the report")
    for name, (kind, text) in OPTION_FLAGS.items():
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=kind, help=text)
    for name, text in SWITCH_FLAGS.items():
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, action="store_true", help=text)
    return parser


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    """
    Raises:
        ConfigError: on invalid values; argparse itself exits with 2 on unknown flags
    """
    args = build_parser().parse_args(argv)
    options = {name: getattr(args, name) for name in list(OPTION_FLAGS) + list(SWITCH_FLAGS)}
    options["timing"] = args.timing
    return RunConfig(
        subcommand=args.subcommand,
        input_path=args.input_path,
        output_path=args.output_path,
        seed=args.seed,
        budget=args.budget,
        workers=args.workers,
        report_format=args.report_format,
        options=options,
    )


def write_output(data: bytes, output_path: Optional[str]) -> None:
    if output_path:
        with open(output_path, "wb") as handle:
            handle.write(data)
        logger.info(f"✅ Report written to {output_path}")
    else:
        sys.stdout.write(data.decode("utf-8"))
        sys.stdout.write("\n")
        sys.stdout.flush()


def dispatch(config: RunConfig) -> int:
    """
    Run one subcommand and write its report

    Returns:
        0 on success, 1 when a verified property failed, 2 on usage or input errors
    """
    try:
        report, passed = TensorForge(config).run()
        data = render(report, config.report_format, bool(config.option("timing", False)))
        write_output(data, config.output_path)
    except VerificationFailure as e:
        logger.error(f"❌ {e}")
        payload = {"error": str(e), "witness": e.witness}
        write_output(render(payload, "json"), config.output_path)
        return EXIT_FAILED
    except (ForgeError, OSError, json.JSONDecodeError) as e:
        logger.error(f"❌ {config.subcommand} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if not passed:
        logger.warning(f"⚠️ {config.subcommand}: verification failed, witnesses in report")
        return EXIT_FAILED
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
    try:
        config = parse_config(argv)
    except ConfigError as e:
        logger.error(f"❌ Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return dispatch(config)


if __name__ == "__main__":
    sys.exit(main())
