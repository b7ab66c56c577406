"""Evaluation metrics: confusion matrix, P/R/F1, QWK, KLD and ROC/AUC."""

from .confusion import ConfusionMatrix, accuracy, confusion_matrix
from .errors import (
    DegenerateMarginalsError,
    EmptyMatrixError,
    LabelOutOfRangeError,
    MetricsError,
    SingleClassOnlyError,
)
from .report import (
    ClassReport,
    MetricsReport,
    evaluate_predictions,
    format_report,
    write_confusion_csv,
    write_report_csv,
    write_report_json,
    write_roc_csv,
)
from .roc import AUCResult, RocCurve, binary_auc, roc_auc, roc_curve, roc_curves
from .scores import (
    ClassScore,
    PrecisionRecallF1,
    f1_score,
    kld,
    mean_cross_entropy,
    one_hot,
    precision_recall_f1,
    qwk,
)

__all__ = [
    "AUCResult",
    "ClassReport",
    "ClassScore",
    "ConfusionMatrix",
    "DegenerateMarginalsError",
    "EmptyMatrixError",
    "LabelOutOfRangeError",
    "MetricsError",
    "MetricsReport",
    "PrecisionRecallF1",
    "RocCurve",
    "SingleClassOnlyError",
    "accuracy",
    "binary_auc",
    "confusion_matrix",
    "evaluate_predictions",
    "f1_score",
    "format_report",
    "kld",
    "mean_cross_entropy",
    "one_hot",
    "precision_recall_f1",
    "qwk",
    "roc_auc",
    "roc_curve",
    "roc_curves",
    "write_confusion_csv",
    "write_report_csv",
    "write_report_json",
    "write_roc_csv",
]
