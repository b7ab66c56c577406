"""Checkpoint evaluation on a manifest split, and single-image prediction."""

import logging
import os
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from imaging import DatasetManifest, Split, load_image
from metrics import (
    ConfusionMatrix,
    MetricsReport,
    evaluate_predictions,
    roc_curves,
    write_confusion_csv,
    write_report_csv,
    write_report_json,
    write_roc_csv,
)
from model import ArchConfig, TwoBranchNetwork, forward_fused, load_checkpoint, top_prediction
from preprocess import branch_inputs

from .errors import EmptySplitError, TrainerError
from .dataset import prepare_records

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def _class_names(model: TwoBranchNetwork, fallback: Optional[Sequence[str]] = None) -> Tuple[str, ...]:
    names = model.metadata.get("class_names") or fallback
    if names is None:
        names = [str(c) for c in range(model.cfg.num_classes)]
    if len(names) != model.cfg.num_classes:
        raise TrainerError(f"{len(names)} class names for a {model.cfg.num_classes}-class model")
    return tuple(names)


def evaluate(
    checkpoint: PathLike,
    manifest: DatasetManifest,
    split: Union[str, Split],
    out_dir: Optional[PathLike] = None,
    expected_arch: Optional[ArchConfig] = None,
    cache_dir: Optional[PathLike] = None,
    threads: int = 0,
    batch_size: int = 64,
) -> Tuple[MetricsReport, ConfusionMatrix]:
    """
    Score a checkpoint on one split in infer mode.

    When out_dir is given it receives report.json, report.csv,
    confusion.csv and roc.csv.

    Raises:
        EmptySplitError: the split holds no samples
        VersionMismatchError: checkpoint disagrees with expected_arch
    """
    split = Split(split)
    records = manifest.subset(split)
    if not records:
        raise EmptySplitError(f"The {split.value} split is empty")

    model = load_checkpoint(checkpoint, expected_arch=expected_arch)
    class_names = _class_names(model, manifest.class_names)
    data = prepare_records(
        records,
        size=model.cfg.input_size,
        signed_log=bool(model.metadata.get("signed_log", False)),
        cache_dir=cache_dir,
        threads=threads,
    )
    probs = model.predict_proba(data.x1, data.x2, batch_size=batch_size)
    report = evaluate_predictions(probs, data.labels, class_names, epoch=model.metadata.get("epoch"))
    report.extra = {
        "split": split.value,
        "checkpoint": str(checkpoint),
        "training": {k: model.metadata.get(k) for k in ("seed", "precision", "signed_log", "epoch")},
    }

    if out_dir is not None:
        out = Path(out_dir)
        write_report_json(report, out / "report.json")
        write_report_csv(report, out / "report.csv")
        write_confusion_csv(report.confusion, out / "confusion.csv")
        write_roc_csv(roc_curves(probs, data.labels), class_names, out / "roc.csv")
        logger.info(f"Wrote evaluation outputs to {out}")
    return report, report.confusion


def predict(checkpoint: PathLike, image: PathLike) -> Tuple[str, np.ndarray]:
    """
    Classify one image file.

    Returns:
        Tuple of (predicted class name, probability vector)
    """
    model = load_checkpoint(checkpoint)
    class_names = _class_names(model)
    std_map, dct_map = branch_inputs(
        load_image(image),
        size=model.cfg.input_size,
        signed_log_dct=bool(model.metadata.get("signed_log", False)),
    )
    probs = forward_fused(model, std_map, dct_map, mode="infer")
    name, confidence = top_prediction(probs, class_names)
    logger.info(f"{image}: {name} ({100 * confidence:.2f}%)")
    return name, probs
