"""Training commands: train and ablate."""

import argparse
import logging

from imaging import read_manifest
from model import layer_ledger, load_arch
from trainer.config import Config, TrainConfig
from trainer.loop import run_ablation, train

from .base import BaseCommand

logger = logging.getLogger(__name__)


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags shared by train and ablate."""
    parser.add_argument("--manifest", required=True, help="Manifest CSV (path,class_id,split)")
    parser.add_argument("--config", default=None, help=f"Architecture file (default: {Config.ARCH_CONFIG})")
    parser.add_argument("--seed", type=int, default=None, help="Random seed")
    parser.add_argument("--epochs", type=int, default=None, help="Number of epochs")
    parser.add_argument("--out-dir", required=True, help="Run output directory")
    parser.add_argument("--batch-size", type=int, default=None, help="Mini-batch size (>= 2)")
    parser.add_argument("--lr", type=float, default=None, help="Learning rate")
    parser.add_argument("--optimizer", choices=["adam", "sgd"], default=None)
    parser.add_argument("--precision", choices=["float64", "float32"], default=None)
    parser.add_argument("--signed-log", action="store_true", default=None, help="Apply signed log to DCT maps")
    parser.add_argument("--threads", type=int, default=None, help="Preprocessing workers (0 = in-process)")


def train_config(args: argparse.Namespace, mode=None) -> TrainConfig:
    return TrainConfig.from_config(
        arch_path=args.config,
        mode=mode,
        epochs=args.epochs,
        batch_size=args.batch_size,
        optimizer=args.optimizer,
        learning_rate=args.lr,
        seed=args.seed,
        precision=args.precision,
        signed_log=args.signed_log,
        threads=args.threads,
    )


def print_settings(cfg: TrainConfig, arch) -> None:
    print("=" * 50)
    print("TEM virus classifier")
    print("=" * 50)
    print(f"Architecture: {cfg.arch_path} ({arch.mode.value})")
    print(f"Epochs: {cfg.epochs}  Batch size: {cfg.batch_size}")
    print(f"Optimizer: {cfg.optimizer} (lr {cfg.learning_rate})")
    print(f"Seed: {cfg.seed}  Precision: {cfg.precision}  Signed-log DCT: {cfg.signed_log}")
    print(f"Workers: {cfg.threads}")
    print("=" * 50)
    for section, token, shape, count in layer_ledger(arch):
        logger.debug(f"{section:<10} {token:<22} -> {shape} ({count} params)")


class TrainCommand(BaseCommand):
    """Train one model and keep its best and last checkpoints."""

    name = "train"
    description = "Train the classifier, tracking the best test-accuracy epoch"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_run_arguments(parser)
        parser.add_argument(
            "--mode", choices=["fused", "branch1", "branch2"], default=None,
            help="Which branches to use (default: the architecture file's MODE)",
        )

    def execute(self, args: argparse.Namespace) -> int:
        cfg = train_config(args, mode=args.mode)
        arch = load_arch(cfg.arch_path, cfg.mode)
        print_settings(cfg, arch)
        manifest = read_manifest(args.manifest)
        result = train(cfg, manifest, args.out_dir, arch=arch)
        print(f"Best checkpoint: {result.best_checkpoint}")
        print(f"Last checkpoint: {result.last_checkpoint}")
        return 0


class AblateCommand(BaseCommand):
    """Compare branch1-only, branch2-only and fused training."""

    name = "ablate"
    description = "Train each branch alone and fused, then write ablation.csv"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_run_arguments(parser)

    def execute(self, args: argparse.Namespace) -> int:
        cfg = train_config(args)
        arch = load_arch(cfg.arch_path)
        print_settings(cfg, arch)
        rows = run_ablation(cfg, read_manifest(args.manifest), args.out_dir, arch=arch)

        print("=" * 70)
        print("ABLATION REPORT")
        print("=" * 70)
        for row in rows:
            print(
                f"{row['preprocessing']:<24} {row['model']:<28} "
                f"acc {100 * row['accuracy']:6.2f}  P {100 * row['precision']:6.2f}  "
                f"R {100 * row['recall']:6.2f}  F1 {100 * row['f1']:6.2f}"
            )
        print("=" * 70)
        return 0
