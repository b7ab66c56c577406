"""Training loop and ablation runner."""

import csv
import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from imaging import DatasetManifest, Split, split_stratified
from metrics import MetricsReport, evaluate_predictions, write_confusion_csv
from model import ArchConfig, Mode, TwoBranchNetwork, build_model, load_arch, save_checkpoint
from nn import create_optimizer, softmax_cross_entropy

from .config import TrainConfig
from .dataset import PreparedSplit, prepare_records
from .errors import EmptySplitError, TrainerError
from .history import EpochRecord, SplitMetrics, TrainingHistory, save_history

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]

BEST_CHECKPOINT = "best.tvck"
LAST_CHECKPOINT = "last.tvck"
HISTORY_FILE = "history.json"
ABLATION_FILE = "ablation.csv"
ABLATION_HEADER = ["preprocessing", "model", "accuracy", "precision", "recall", "f1"]

ABLATION_LABELS = {
    Mode.BRANCH1_ONLY: ("local std filter", "first convolutional model"),
    Mode.BRANCH2_ONLY: ("DCT", "second convolutional model"),
    Mode.FUSED: ("local std filter + DCT", "fused model"),
}


@dataclass
class TrainResult:
    history: TrainingHistory
    best_checkpoint: Path
    last_checkpoint: Path
    best_report: MetricsReport
    last_report: MetricsReport
    model: TwoBranchNetwork


def make_batches(order: np.ndarray, batch_size: int) -> List[np.ndarray]:
    """Consecutive slices of `order`; a trailing batch of one joins the previous batch."""
    batches = [order[i:i + batch_size] for i in range(0, len(order), batch_size)]
    if len(batches) > 1 and len(batches[-1]) == 1:
        tail = batches.pop()
        batches[-1] = np.concatenate([batches[-1], tail])
    return batches


def resolve_arch(cfg: TrainConfig, arch: Optional[ArchConfig] = None) -> ArchConfig:
    if arch is None:
        arch = load_arch(cfg.arch_path)
    return arch.with_mode(cfg.mode) if cfg.mode is not None else arch


def ensure_split(manifest: DatasetManifest, cfg: TrainConfig) -> DatasetManifest:
    """Split stratified by class unless every record already carries a split."""
    if all(r.split is not None for r in manifest.records):
        return manifest
    logger.info(f"Manifest has unsplit records; splitting {cfg.train_fraction:.2f}/{1 - cfg.train_fraction:.2f}")
    return split_stratified(manifest, cfg.train_fraction, cfg.seed)


def _evaluate_split(
    model: TwoBranchNetwork,
    data: PreparedSplit,
    class_names,
    epoch: int,
    batch_size: int,
) -> MetricsReport:
    probs = model.predict_proba(data.x1, data.x2, batch_size=batch_size)
    return evaluate_predictions(probs, data.labels, class_names, epoch=epoch)


def train(
    cfg: TrainConfig,
    manifest: DatasetManifest,
    out_dir: PathLike,
    arch: Optional[ArchConfig] = None,
    cache_dir: Optional[PathLike] = None,
) -> TrainResult:
    """
    Train for cfg.epochs epochs, evaluating both splits after each one.

    Args:
        cfg: Run configuration
        manifest: Dataset; split stratified first if records lack a split
        out_dir: Receives best/last checkpoints, history.json and confusion CSVs
        arch: Architecture; loaded from cfg.arch_path when omitted
        cache_dir: TVFM cache; defaults to <out_dir>/cache

    Returns:
        TrainResult with the history and both checkpoint paths

    Raises:
        EmptySplitError: train or test split is empty
        SampleError: a sample failed to decode or preprocess
        NumericError: NaN or Inf appeared in a forward or backward pass
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    arch = resolve_arch(cfg, arch)
    manifest = ensure_split(manifest, cfg)
    if manifest.num_classes != arch.num_classes:
        raise TrainerError(
            f"Manifest has {manifest.num_classes} classes, architecture expects {arch.num_classes}"
        )

    # 1. Preprocess once
    cache = Path(cache_dir) if cache_dir is not None else out / "cache"
    splits: Dict[Split, PreparedSplit] = {}
    for split in (Split.TRAIN, Split.TEST):
        records = manifest.subset(split)
        if not records:
            raise EmptySplitError(f"The {split.value} split is empty")
        splits[split] = prepare_records(
            records, size=arch.input_size, signed_log=cfg.signed_log,
            cache_dir=cache, threads=cfg.threads,
        )
    train_data, test_data = splits[Split.TRAIN], splits[Split.TEST]
    if len(train_data) < 2:
        raise TrainerError("Training needs at least 2 samples for batch normalization")

    # 2. Build model and optimizer
    model = build_model(arch, seed=cfg.seed, precision=cfg.precision)
    model.metadata.update({
        "class_names": list(manifest.class_names),
        "signed_log": cfg.signed_log,
    })
    optimizer = create_optimizer(cfg.optimizer, cfg.learning_rate)
    params = model.parameters()
    history = TrainingHistory(config={**cfg.to_dict(), "mode": arch.mode.value})

    print("=" * 70)
    print(f"TRAINING {arch.mode.value.upper()} - {cfg.epochs} epochs, "
          f"{len(train_data)} train / {len(test_data)} test, {model.parameter_count} parameters")
    print("=" * 70)

    best_report: Optional[MetricsReport] = None
    best_path, last_path = out / BEST_CHECKPOINT, out / LAST_CHECKPOINT

    # 3. Epochs
    for epoch in range(1, cfg.epochs + 1):
        order = np.random.default_rng([cfg.seed, epoch]).permutation(len(train_data))
        model.reseed_dropout(cfg.seed, epoch)
        batch_losses = []
        for idx in make_batches(order, cfg.batch_size):
            model.zero_grad()
            logits = model.logits(train_data.x1[idx], train_data.x2[idx], training=True)
            loss = softmax_cross_entropy(logits, train_data.labels[idx])
            loss.backward()
            optimizer.step(params)
            batch_losses.append(loss.item())

        train_report = _evaluate_split(model, train_data, manifest.class_names, epoch, cfg.eval_batch_size)
        test_report = _evaluate_split(model, test_data, manifest.class_names, epoch, cfg.eval_batch_size)
        history.append(EpochRecord(
            epoch=epoch,
            train=SplitMetrics.from_report(train_report),
            test=SplitMetrics.from_report(test_report),
        ))
        logger.info(
            f"Epoch {epoch}/{cfg.epochs}: batch loss {np.mean(batch_losses):.4f}, "
            f"train acc {train_report.accuracy:.4f}, test acc {test_report.accuracy:.4f}, "
            f"test loss {test_report.loss:.4f}"
        )

        if best_report is None or test_report.accuracy > best_report.accuracy:
            best_report = test_report
            save_checkpoint(model, best_path, _checkpoint_meta(epoch, test_report))
            logger.info(f"New best test accuracy {test_report.accuracy:.4f} at epoch {epoch}")

    # 4. Persist
    last_report = test_report
    save_checkpoint(model, last_path, _checkpoint_meta(cfg.epochs, last_report))
    save_history(history, out / HISTORY_FILE)
    write_confusion_csv(best_report.confusion, out / "confusion_best.csv")
    write_confusion_csv(last_report.confusion, out / "confusion_last.csv")

    print("=" * 70)
    print(f"Best test accuracy {100 * best_report.accuracy:.2f}% at epoch {history.best_epoch}; "
          f"last {100 * last_report.accuracy:.2f}%")
    print("=" * 70)

    return TrainResult(
        history=history,
        best_checkpoint=best_path,
        last_checkpoint=last_path,
        best_report=best_report,
        last_report=last_report,
        model=model,
    )


def _checkpoint_meta(epoch: int, report: MetricsReport) -> Dict:
    return {
        "epoch": epoch,
        "metrics": {
            "accuracy": report.accuracy,
            "precision": report.macro["precision"],
            "recall": report.macro["recall"],
            "f1": report.macro["f1"],
            "loss": report.loss,
            "kld": report.kld,
        },
    }


def run_ablation(
    cfg: TrainConfig,
    manifest: DatasetManifest,
    out_dir: PathLike,
    arch: Optional[ArchConfig] = None,
) -> List[Dict]:
    """
    Train branch1-only, branch2-only and fused models with one seed and
    compare their best test scores.

    Writes `<out_dir>/ablation.csv` and one run directory per mode.

    Returns:
        One row dict per mode, in ABLATION_HEADER keys
    """
    out = Path(out_dir)
    base = arch if arch is not None else load_arch(cfg.arch_path)
    manifest = ensure_split(manifest, cfg)
    cfg = replace(cfg, mode=None)

    rows = []
    for mode in (Mode.BRANCH1_ONLY, Mode.BRANCH2_ONLY, Mode.FUSED):
        result = train(cfg, manifest, out / mode.value, arch=base.with_mode(mode), cache_dir=out / "cache")
        report = result.best_report
        preprocessing, model_name = ABLATION_LABELS[mode]
        rows.append({
            "preprocessing": preprocessing,
            "model": model_name,
            "accuracy": report.accuracy,
            "precision": report.macro["precision"],
            "recall": report.macro["recall"],
            "f1": report.f1_of_means,
        })

    with open(out / ABLATION_FILE, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=ABLATION_HEADER, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(float(v)) if isinstance(v, float) else v) for k, v in row.items()})
    logger.info(f"Wrote ablation comparison to {out / ABLATION_FILE}")
    return rows
