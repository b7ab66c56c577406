"""Data preparation commands: manifest, preprocess and synth."""

import argparse
import logging

from imaging import build_manifest, split_stratified, write_manifest
from trainer.config import Config
from trainer.dataset import PREPROCESS_MODES, preprocess_directory
from trainer.synth import synth

from .base import BaseCommand

logger = logging.getLogger(__name__)


class ManifestCommand(BaseCommand):
    """Scan a class-per-directory image tree into a split manifest."""

    name = "manifest"
    description = "Build a manifest CSV from <input-dir>/<class>/<images> and assign the train/test split"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--input-dir", required=True, help="Directory with one subdirectory per class")
        parser.add_argument("--out", required=True, help="Manifest CSV to write")
        parser.add_argument(
            "--classes", type=int, default=None,
            help=f"Expected class directories (default: TEMVIRO_NUM_CLASSES, {Config.NUM_CLASSES})",
        )
        parser.add_argument("--train-fraction", type=float, default=None, help="Train share per class")
        parser.add_argument("--seed", type=int, default=None, help="Split seed")
        parser.add_argument("--no-split", action="store_true", help="Leave the split column empty")

    def execute(self, args: argparse.Namespace) -> int:
        classes = args.classes if args.classes is not None else Config.NUM_CLASSES
        manifest = build_manifest(args.input_dir, expected_classes=classes)
        if not args.no_split:
            manifest = split_stratified(
                manifest,
                args.train_fraction if args.train_fraction is not None else Config.TRAIN_FRACTION,
                seed=args.seed if args.seed is not None else Config.SEED,
            )
        write_manifest(manifest, args.out, relative=True)
        logger.info(f"Manifest for {args.input_dir} written to {args.out}")

        print(f"Wrote {args.out}: {len(manifest)} images, {manifest.num_classes} classes")
        if not args.no_split:
            print(f"  train per class: {manifest.class_counts('train')}")
            print(f"  test per class:  {manifest.class_counts('test')}")
        return 0


class PreprocessCommand(BaseCommand):
    """Write std-filter and/or DCT maps for a directory of images."""

    name = "preprocess"
    description = "Compute branch input maps (TVFM files) for every image in a directory"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--input-dir", required=True, help="Directory of TIFF/PNG/PGM images")
        parser.add_argument("--out", required=True, help="Output directory for .tvfm files")
        parser.add_argument(
            "--mode", choices=PREPROCESS_MODES, default="both",
            help="Which maps to write (default: both)",
        )
        parser.add_argument("--size", type=int, default=128, help="Side length of the maps (default: 128)")
        parser.add_argument("--signed-log", action="store_true", help="Apply signed log to DCT maps")
        parser.add_argument("--fast-dct", action="store_true", help="Use the scipy DCT instead of the separable one")

    def execute(self, args: argparse.Namespace) -> int:
        count = preprocess_directory(
            args.input_dir, args.out, mode=args.mode, size=args.size,
            signed_log=args.signed_log or Config.DCT_SIGNED_LOG, threads=Config.THREADS,
            fast_dct=args.fast_dct,
        )
        print(f"Preprocessed {count} images into {args.out}")
        return 0


class SynthCommand(BaseCommand):
    """Generate the synthetic grating dataset."""

    name = "synth"
    description = "Write a synthetic 4-class grating dataset with its manifest"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--out", required=True, help="Output directory")
        parser.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
        parser.add_argument("--classes", type=int, default=4, help="Number of classes (default: 4)")
        parser.add_argument("--train-per-class", type=int, default=200)
        parser.add_argument("--test-per-class", type=int, default=50)

    def execute(self, args: argparse.Namespace) -> int:
        manifest, manifest_path = synth(
            args.out,
            classes=args.classes,
            train_per_class=args.train_per_class,
            test_per_class=args.test_per_class,
            seed=args.seed,
        )
        print(f"Wrote {len(manifest)} images; manifest at {manifest_path}")
        return 0
