#!/usr/bin/env python3
"""CLI entry point for the TEM virus classifier."""

import argparse
import logging
import sys
from typing import List, Optional

from commands import create_registry
from imaging import ImageError
from metrics import MetricsError
from model import ModelError
from nn import NNError, NumericError
from preprocess import PreprocessError

from .config import OPTIMIZERS, PRECISIONS, Config
from .errors import TrainerError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

DATA_ERRORS = (ImageError, PreprocessError, ModelError, MetricsError, TrainerError, NNError, OSError)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def configure_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stdout)]
    )


def check_config() -> bool:
    """Print an error for each invalid TEMVIRO_* setting; True when all are valid."""
    ok = True
    if not Config.validate_threads():
        print(f"ERROR: TEMVIRO_THREADS must be >= 0, got {Config.THREADS}")
        ok = False
    if not Config.validate_training():
        print(
            "ERROR: invalid training settings "
            f"(TEMVIRO_EPOCHS={Config.EPOCHS}, TEMVIRO_BATCH_SIZE={Config.BATCH_SIZE}, "
            f"TEMVIRO_LR={Config.LEARNING_RATE}, TEMVIRO_TRAIN_FRACTION={Config.TRAIN_FRACTION})"
        )
        ok = False
    if not Config.validate_precision():
        print(
            f"ERROR: TEMVIRO_PRECISION must be one of {PRECISIONS} and TEMVIRO_OPTIMIZER one of "
            f"{OPTIMIZERS}, got {Config.PRECISION!r} and {Config.OPTIMIZER!r}"
        )
        ok = False
    if not Config.validate_dataset():
        print(f"ERROR: TEMVIRO_NUM_CLASSES must be >= 2, got {Config.NUM_CLASSES}")
        ok = False
    return ok


def build_parser(registry) -> CliParser:
    parser = CliParser(
        prog="python -m trainer.main",
        description='TEM virus classifier - two-branch CNN over std-filter and DCT maps',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m trainer.main manifest --input-dir data/tem --out data/tem/manifest.csv --seed 0
  python -m trainer.main synth --out data/synth --seed 0
  python -m trainer.main train --manifest data/synth/manifest.csv --config configs/synth.cfg --epochs 30 --out-dir runs/synth
  python -m trainer.main evaluate --checkpoint runs/synth/best.tvck --manifest data/synth/manifest.csv --split test --report runs/synth/eval
  python -m trainer.main predict --checkpoint runs/synth/best.tvck --image data/synth/grating_0/0000.pgm
  python -m trainer.main export-curves --history runs/synth/history.json --out-dir runs/synth/curves
  python -m trainer.main ablate --manifest data/synth/manifest.csv --config configs/synth.cfg --epochs 30 --out-dir runs/ablation
  python -m trainer.main preprocess --input-dir data/tem --out data/tem_maps --mode both
  python -m trainer.main gradcheck
        """
    )
    registry.add_subparsers(parser)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, dispatch the subcommand and map failures to exit codes."""
    registry = create_registry()
    parser = build_parser(registry)
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    configure_logging()
    if not check_config():
        return EXIT_USAGE

    try:
        return registry.execute(args.command, args)
    except NumericError as e:
        logger.exception("Numeric failure")
        print(f"ERROR: {e}")
        return EXIT_NUMERIC
    except DATA_ERRORS as e:
        logger.exception(f"{args.command} failed")
        print(f"ERROR: {e}")
        return EXIT_DATA
    except ValueError as e:
        print(f"ERROR: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
