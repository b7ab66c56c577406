"""MetricsReport assembly and serialization."""

import csv
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from .confusion import ConfusionMatrix, accuracy, confusion_matrix
from .errors import DegenerateMarginalsError
from .roc import RocCurve, roc_auc
from .scores import f1_score, kld, mean_cross_entropy, one_hot, precision_recall_f1, qwk

logger = logging.getLogger(__name__)

REPORT_VERSION = 1
CSV_HEADER = ["class", "precision", "recall", "f1", "auc", "support"]

PathLike = Union[str, os.PathLike]


@dataclass
class ClassReport:
    name: str
    precision: float
    recall: float
    f1: float
    auc: Optional[float]
    support: int
    flagged: bool = False


@dataclass
class MetricsReport:
    """Every evaluation quantity for one pass over one split."""
    accuracy: float
    per_class: List[ClassReport]
    macro: Dict[str, Optional[float]]
    qwk: Optional[float]
    kld: float
    loss: float
    confusion: ConfusionMatrix
    epoch: Optional[int] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def f1_of_means(self) -> float:
        """Harmonic mean of macro precision and macro recall."""
        return f1_score(self.macro["precision"], self.macro["recall"])

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "version": REPORT_VERSION,
            "epoch": self.epoch,
            "accuracy": self.accuracy,
            "loss": self.loss,
            "kld": self.kld,
            "qwk": self.qwk,
            "macro": dict(self.macro),
            "f1_of_means": self.f1_of_means,
            "per_class": [
                {
                    "class": c.name,
                    "precision": c.precision,
                    "recall": c.recall,
                    "f1": c.f1,
                    "auc": c.auc,
                    "support": c.support,
                    "flagged": c.flagged,
                }
                for c in self.per_class
            ],
            "confusion": {
                "class_names": list(self.confusion.class_names),
                "counts": self.confusion.counts.tolist(),
            },
        }
        data.update(self.extra)
        return data


def evaluate_predictions(
    probs: np.ndarray,
    labels: Sequence[int],
    class_names: Sequence[str],
    epoch: Optional[int] = None,
) -> MetricsReport:
    """
    Score predicted class probabilities against true labels.

    Args:
        probs: [N, J] probability rows
        labels: N true class indices
        class_names: J display names
        epoch: Recorded in the report when given

    Returns:
        MetricsReport with the confusion matrix attached
    """
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    num_classes = len(class_names)
    predicted = np.argmax(probs, axis=1) if probs.size else np.zeros(0, dtype=np.int64)

    cm = confusion_matrix(labels, predicted, num_classes, class_names)
    prf = precision_recall_f1(cm)
    aucs = roc_auc(probs, labels)

    try:
        kappa = qwk(cm)
    except DegenerateMarginalsError as e:
        logger.warning(f"QWK undefined: {e}")
        kappa = None

    per_class = [
        ClassReport(
            name=class_names[c],
            precision=s.precision,
            recall=s.recall,
            f1=s.f1,
            auc=aucs.per_class[c],
            support=int(cm.row_sums[c]),
            flagged=s.flagged,
        )
        for c, s in enumerate(prf.per_class)
    ]
    macro = {
        "precision": prf.macro.precision,
        "recall": prf.macro.recall,
        "f1": prf.macro.f1,
        "auc": aucs.macro,
    }
    return MetricsReport(
        accuracy=accuracy(cm),
        per_class=per_class,
        macro=macro,
        qwk=kappa,
        kld=kld(probs, one_hot(labels, num_classes)),
        loss=mean_cross_entropy(probs, labels),
        confusion=cm,
        epoch=epoch,
    )


def _pct(value: Optional[float]) -> str:
    return "   n/a" if value is None else f"{100 * value:6.2f}"


def format_report(report: MetricsReport, title: str = "METRICS REPORT") -> str:
    """Human-readable report; percentages to two decimals."""
    width = max([len(c.name) for c in report.per_class] + [7])
    lines = [
        "=" * 70,
        title,
        "=" * 70,
        f"Accuracy: {100 * report.accuracy:.2f}%"
        + (f"  (epoch {report.epoch})" if report.epoch is not None else ""),
        f"Correct: {report.confusion.trace}/{report.confusion.total}",
        f"Loss: {report.loss:.4f}  KLD: {report.kld:.4f}  "
        f"QWK: {'n/a' if report.qwk is None else f'{report.qwk:.4f}'}",
        "",
        f"{'Class':<{width}}  Precision  Recall      F1     AUC  Support",
    ]
    for c in report.per_class:
        flag = "  *" if c.flagged else ""
        lines.append(
            f"{c.name:<{width}}     {_pct(c.precision)}  {_pct(c.recall)}  "
            f"{_pct(c.f1)}  {_pct(c.auc)}  {c.support:7d}{flag}"
        )
    m = report.macro
    lines.extend([
        f"{'Average':<{width}}     {_pct(m['precision'])}  {_pct(m['recall'])}  "
        f"{_pct(m['f1'])}  {_pct(m['auc'])}",
        "",
        f"F1 of macro precision/recall: {100 * report.f1_of_means:.2f}%",
    ])
    if any(c.flagged for c in report.per_class):
        lines.append("* class with an empty prediction column or true row")
    lines.append("=" * 70)
    return "\n".join(lines)


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_report_json(report: MetricsReport, path: PathLike) -> None:
    with open(_prepare(path), "w", encoding="utf-8") as f:
        json.dump(report.to_dict(), f, indent=2)


def write_report_csv(report: MetricsReport, path: PathLike) -> None:
    """One row per class plus an `Average` row; full-precision values."""
    def cell(value):
        return "" if value is None else repr(float(value))

    with open(_prepare(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for c in report.per_class:
            writer.writerow([c.name, cell(c.precision), cell(c.recall), cell(c.f1), cell(c.auc), c.support])
        m = report.macro
        writer.writerow([
            "Average", cell(m["precision"]), cell(m["recall"]), cell(m["f1"]), cell(m["auc"]),
            report.confusion.total,
        ])


def write_confusion_csv(cm: ConfusionMatrix, path: PathLike) -> None:
    """Rows = true class, columns = predicted class, both labelled by name."""
    with open(_prepare(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["true\\predicted", *cm.class_names])
        for name, row in zip(cm.class_names, cm.counts):
            writer.writerow([name, *[int(v) for v in row]])


def write_roc_csv(curves: Sequence[RocCurve], class_names: Sequence[str], path: PathLike) -> None:
    with open(_prepare(path), "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["class", "fpr", "tpr", "threshold"])
        for curve in curves:
            for fpr, tpr, thr in zip(curve.fpr, curve.tpr, curve.thresholds):
                writer.writerow([class_names[curve.class_id], repr(float(fpr)), repr(float(tpr)), repr(float(thr))])
