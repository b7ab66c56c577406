"""Synthetic oriented-grating dataset for desk-scale runs."""

import logging
import os
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from imaging import DatasetManifest, RawImage, SampleRecord, Split, save_pgm, write_manifest

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]

SYNTH_SIZE = 128
NOISE_SIGMA = 0.1
MANIFEST_NAME = "manifest.csv"


def class_name(class_id: int) -> str:
    return f"grating_{class_id}"


def grating(
    class_id: int,
    rng: np.random.Generator,
    size: int = SYNTH_SIZE,
    noise_sigma: float = NOISE_SIGMA,
) -> RawImage:
    """
    One noisy sinusoidal grating.

    Class c is oriented at c * pi/4 with 6 + 4c cycles across the image and
    a random phase; the clean wave spans [0.1, 0.9] before Gaussian noise.
    """
    angle = class_id * np.pi / 4
    cycles = 6 + 4 * class_id
    phase = rng.uniform(0.0, 2 * np.pi)
    coords = np.arange(size) / size
    y, x = np.meshgrid(coords, coords, indexing="ij")
    wave = 0.5 + 0.4 * np.sin(2 * np.pi * cycles * (x * np.cos(angle) + y * np.sin(angle)) + phase)
    noisy = wave + rng.normal(0.0, noise_sigma, size=wave.shape)
    pixels = np.clip(np.rint(noisy * 255.0), 0, 255).astype(np.uint8)
    return RawImage.from_array(pixels)


def synth(
    out_dir: PathLike,
    classes: int = 4,
    train_per_class: int = 200,
    test_per_class: int = 50,
    seed: int = 0,
    size: int = SYNTH_SIZE,
) -> Tuple[DatasetManifest, Path]:
    """
    Write `<out>/<class>/<nnnn>.pgm` images plus `<out>/manifest.csv`.

    Per class the first train_per_class images go to train and the rest to
    test. Manifest paths are relative to out_dir.

    Returns:
        Tuple of (manifest with absolute paths, manifest file path)
    """
    if classes < 2:
        raise ValueError(f"Need at least 2 classes, got {classes}")
    out = Path(out_dir)
    rng = np.random.default_rng(seed)
    per_class = train_per_class + test_per_class

    relative, absolute = [], []
    for c in range(classes):
        for i in range(per_class):
            rel = f"{class_name(c)}/{i:04d}.pgm"
            save_pgm(grating(c, rng, size), out / rel)
            split = Split.TRAIN if i < train_per_class else Split.TEST
            relative.append(SampleRecord(path=rel, class_id=c, split=split))
            absolute.append(SampleRecord(path=str(out / rel), class_id=c, split=split))

    names = tuple(class_name(c) for c in range(classes))
    manifest_path = out / MANIFEST_NAME
    write_manifest(DatasetManifest(records=tuple(relative), class_names=names), manifest_path)
    logger.info(f"Wrote {len(relative)} synthetic images ({classes} classes) to {out}")
    return DatasetManifest(records=tuple(absolute), class_names=names), manifest_path
