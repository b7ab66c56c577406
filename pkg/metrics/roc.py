"""One-vs-rest ROC curves and AUC."""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from sklearn import metrics as skm

from .errors import LabelOutOfRangeError, SingleClassOnlyError

logger = logging.getLogger(__name__)


@dataclass
class AUCResult:
    per_class: List[Optional[float]]  # None where the class lacks positives or negatives
    macro: Optional[float]

    @property
    def skipped(self) -> List[int]:
        return [c for c, v in enumerate(self.per_class) if v is None]


@dataclass
class RocCurve:
    class_id: int
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray  # first entry is +inf: nothing predicted positive


def _check_inputs(scores: np.ndarray, labels: np.ndarray):
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if scores.ndim != 2 or scores.shape[0] != labels.size:
        raise ValueError(f"Scores {scores.shape} do not match {labels.size} labels")
    if labels.size and (labels.min() < 0 or labels.max() >= scores.shape[1]):
        raise LabelOutOfRangeError(f"Labels must lie in [0, {scores.shape[1]})")
    return scores, labels


def binary_auc(scores: np.ndarray, positives: np.ndarray) -> float:
    """
    Area under the ROC curve: the chance a random positive outscores a
    random negative, ties counting one half.

    Raises:
        SingleClassOnlyError: no positives or no negatives
    """
    positives = np.asarray(positives, dtype=bool)
    n_pos = int(positives.sum())
    n_neg = positives.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassOnlyError(f"AUC needs both classes, got {n_pos} positives and {n_neg} negatives")
    return float(skm.roc_auc_score(positives, np.asarray(scores, dtype=np.float64)))


def roc_auc(scores: np.ndarray, true_labels: np.ndarray) -> AUCResult:
    """Per-class one-vs-rest AUC plus the macro mean over classes where it is defined."""
    scores, labels = _check_inputs(scores, true_labels)
    per_class: List[Optional[float]] = []
    for c in range(scores.shape[1]):
        try:
            per_class.append(binary_auc(scores[:, c], labels == c))
        except SingleClassOnlyError as e:
            logger.warning(f"Skipping AUC for class {c}: {e}")
            per_class.append(None)
    defined = [v for v in per_class if v is not None]
    macro = float(np.mean(defined)) if defined else None
    return AUCResult(per_class=per_class, macro=macro)


def roc_curve(scores: np.ndarray, true_labels: np.ndarray, class_id: int) -> RocCurve:
    """
    ROC points for one class at every distinct score threshold, highest first.

    Raises:
        SingleClassOnlyError: the class has no positives or no negatives
    """
    scores, labels = _check_inputs(scores, true_labels)
    s = scores[:, class_id]
    y = labels == class_id
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassOnlyError(f"Class {class_id}: ROC needs both positives and negatives")

    fpr, tpr, thresholds = skm.roc_curve(y, s, drop_intermediate=False)
    return RocCurve(class_id=class_id, fpr=fpr, tpr=tpr, thresholds=thresholds)


def roc_curves(scores: np.ndarray, true_labels: np.ndarray) -> List[RocCurve]:
    """Curves for every class that has both positives and negatives."""
    scores, labels = _check_inputs(scores, true_labels)
    curves = []
    for c in range(scores.shape[1]):
        try:
            curves.append(roc_curve(scores, labels, c))
        except SingleClassOnlyError:
            continue
    return curves
