"""Confusion matrix and accuracy."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from sklearn import metrics as skm

from .errors import EmptyMatrixError, LabelOutOfRangeError


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with rows = true class, columns = predicted class."""
    counts: np.ndarray
    class_names: Tuple[str, ...]

    @property
    def num_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def trace(self) -> int:
        return int(np.trace(self.counts))

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def __repr__(self) -> str:
        return f"<ConfusionMatrix: {self.num_classes} classes, {self.trace}/{self.total} correct>"


def _labels(values, num_classes: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64).reshape(-1)
    if arr.size and (arr.min() < 0 or arr.max() >= num_classes):
        raise LabelOutOfRangeError(f"{what} labels must lie in [0, {num_classes})")
    return arr


def confusion_matrix(
    true_labels: Sequence[int],
    predicted_labels: Sequence[int],
    num_classes: int,
    class_names: Optional[Sequence[str]] = None,
) -> ConfusionMatrix:
    """
    Tally (true, predicted) pairs.

    Raises:
        LabelOutOfRangeError: if any label lies outside [0, num_classes)
        ValueError: if the sequences differ in length
    """
    t = _labels(true_labels, num_classes, "True")
    p = _labels(predicted_labels, num_classes, "Predicted")
    if t.shape != p.shape:
        raise ValueError(f"Label sequences differ in length: {t.size} vs {p.size}")
    counts = skm.confusion_matrix(t, p, labels=np.arange(num_classes)).astype(np.int64)
    names = tuple(class_names) if class_names is not None else tuple(str(c) for c in range(num_classes))
    if len(names) != num_classes:
        raise ValueError(f"Expected {num_classes} class names, got {len(names)}")
    return ConfusionMatrix(counts=counts, class_names=names)


def accuracy(cm: ConfusionMatrix) -> float:
    """Trace over total."""
    if cm.total == 0:
        raise EmptyMatrixError("Accuracy of an empty confusion matrix is undefined")
    return cm.trace / cm.total
