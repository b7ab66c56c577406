"""Precision, recall, F1, quadratic weighted kappa and KL divergence."""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from nn import ShapeMismatchError

from .confusion import ConfusionMatrix
from .errors import DegenerateMarginalsError, EmptyMatrixError

logger = logging.getLogger(__name__)

PROB_CLAMP = 1e-12


@dataclass
class ClassScore:
    precision: float
    recall: float
    f1: float
    flagged: bool = False  # empty prediction column or empty true row


@dataclass
class PrecisionRecallF1:
    per_class: List[ClassScore]
    macro: ClassScore


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean; 0 when both inputs are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def precision_recall_f1(cm: ConfusionMatrix) -> PrecisionRecallF1:
    """
    Per-class and macro (unweighted mean) precision, recall and F1.

    A class nobody predicted gets precision 0 and is flagged, as is a class
    with no true samples (recall 0).
    """
    if cm.total == 0:
        raise EmptyMatrixError("Precision/recall of an empty confusion matrix is undefined")
    diag = np.diag(cm.counts)
    cols, rows = cm.col_sums, cm.row_sums

    per_class = []
    for c in range(cm.num_classes):
        flagged = cols[c] == 0 or rows[c] == 0
        if flagged:
            logger.warning(
                f"Class {cm.class_names[c]} has an empty "
                f"{'prediction column' if cols[c] == 0 else 'true row'}; its score is set to 0"
            )
        p = diag[c] / cols[c] if cols[c] else 0.0
        r = diag[c] / rows[c] if rows[c] else 0.0
        per_class.append(ClassScore(float(p), float(r), f1_score(p, r), bool(flagged)))

    macro = ClassScore(
        precision=float(np.mean([s.precision for s in per_class])),
        recall=float(np.mean([s.recall for s in per_class])),
        f1=float(np.mean([s.f1 for s in per_class])),
        flagged=any(s.flagged for s in per_class),
    )
    return PrecisionRecallF1(per_class=per_class, macro=macro)


def qwk(cm: ConfusionMatrix) -> float:
    """
    Quadratic weighted kappa over class indices.

    Raises:
        EmptyMatrixError: no samples
        DegenerateMarginalsError: expected weighted disagreement is zero
    """
    total = cm.total
    if total == 0:
        raise EmptyMatrixError("QWK of an empty confusion matrix is undefined")
    j = cm.num_classes
    observed = cm.counts.astype(np.float64)
    expected = np.outer(cm.row_sums, cm.col_sums).astype(np.float64) / total
    idx = np.arange(j)
    weights = (idx[:, None] - idx[None, :]) ** 2 / max(j - 1, 1) ** 2

    denominator = float((weights * expected).sum())
    if denominator == 0.0:
        raise DegenerateMarginalsError("Expected weighted disagreement is zero; QWK undefined")
    return 1.0 - float((weights * observed).sum()) / denominator


def kld(pred: np.ndarray, target: np.ndarray) -> float:
    """
    Mean over rows of sum_j t_j * log(t_j / max(p_j, 1e-12)), with 0*log(0) = 0.

    Raises:
        ShapeMismatchError: if pred and target differ in shape
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape or pred.ndim != 2:
        raise ShapeMismatchError(f"pred {pred.shape} and target {target.shape} must be equal 2D shapes")
    if pred.shape[0] == 0:
        return 0.0
    if not np.allclose(pred.sum(axis=1), 1.0, rtol=0.0, atol=1e-6):
        raise ValueError("Prediction rows must sum to 1 within 1e-6")
    support = target > 0
    safe_t = np.where(support, target, 1.0)
    terms = np.where(support, target * np.log(safe_t / np.maximum(pred, PROB_CLAMP)), 0.0)
    return float(terms.sum(axis=1).mean())


def mean_cross_entropy(pred: np.ndarray, labels: np.ndarray) -> float:
    """Mean -log(max(p[true], 1e-12)); the same quantity the training loss minimizes."""
    pred = np.asarray(pred, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if pred.shape[0] == 0:
        return 0.0
    picked = pred[np.arange(pred.shape[0]), labels]
    return float(-np.log(np.maximum(picked, PROB_CLAMP)).mean())


def one_hot(labels: np.ndarray, num_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.size, num_classes), dtype=np.float64)
    out[np.arange(labels.size), labels] = 1.0
    return out
