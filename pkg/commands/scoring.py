"""Scoring commands: evaluate, predict and export-curves."""

import argparse
import logging

from imaging import read_manifest
from metrics import format_report
from trainer.config import Config
from trainer.evaluation import evaluate, predict
from trainer.history import export_curves, load_history

from .base import BaseCommand

logger = logging.getLogger(__name__)


class EvaluateCommand(BaseCommand):
    """Score a checkpoint on one manifest split."""

    name = "evaluate"
    description = "Evaluate a checkpoint and write report, confusion matrix and ROC points"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--checkpoint", required=True, help="Checkpoint file (.tvck)")
        parser.add_argument("--manifest", required=True, help="Manifest CSV")
        parser.add_argument("--split", choices=["train", "test"], default="test")
        parser.add_argument("--report", required=True, help="Directory receiving report.json/csv, confusion.csv, roc.csv")

    def execute(self, args: argparse.Namespace) -> int:
        report, _ = evaluate(
            args.checkpoint, read_manifest(args.manifest), args.split,
            out_dir=args.report, threads=Config.THREADS,
        )
        print(format_report(report, title=f"EVALUATION REPORT ({args.split})"))
        return 0


class PredictCommand(BaseCommand):
    """Classify a single image."""

    name = "predict"
    description = "Predict the class of one image"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--checkpoint", required=True, help="Checkpoint file (.tvck)")
        parser.add_argument("--image", required=True, help="TIFF/PNG/PGM image")

    def execute(self, args: argparse.Namespace) -> int:
        name, probs = predict(args.checkpoint, args.image)
        print(f"Predicted: {name}")
        for index in probs.argsort()[::-1]:
            print(f"  {index:3d}  {100 * probs[index]:6.2f}%")
        return 0


class ExportCurvesCommand(BaseCommand):
    """Write per-metric learning curves from a history file."""

    name = "export-curves"
    description = "Export accuracy/precision/recall/f1/loss/kld curves as CSV"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--history", required=True, help="history.json written by train")
        parser.add_argument("--out-dir", required=True, help="Directory for the curve CSVs")

    def execute(self, args: argparse.Namespace) -> int:
        history = load_history(args.history)
        paths = export_curves(history, args.out_dir)
        print(f"Wrote {len(paths)} curve files to {args.out_dir} (best epoch {history.best_epoch})")
        return 0
