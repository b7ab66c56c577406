"""Exceptions raised by metric computations."""


class MetricsError(Exception):
    """Base class for metric errors."""
    pass


class LabelOutOfRangeError(MetricsError):
    """Raised when a label lies outside [0, J)."""
    pass


class EmptyMatrixError(MetricsError):
    """Raised when a ratio is requested from a confusion matrix with no samples."""
    pass


class DegenerateMarginalsError(MetricsError):
    """Raised when QWK's expected-disagreement denominator is zero."""
    pass


class SingleClassOnlyError(MetricsError):
    """Raised when a one-vs-rest AUC has no positives or no negatives."""
    pass
