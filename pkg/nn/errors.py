"""Exceptions raised by the tensor engine."""


class NNError(Exception):
    """Base class for tensor engine errors."""
    pass


class ShapeMismatchError(NNError):
    """Raised when operand shapes do not agree."""
    pass


class DegenerateOutputError(NNError):
    """Raised when an operation would produce an empty spatial extent."""
    pass


class BatchTooSmallError(NNError):
    """Raised when batch statistics need at least two samples."""
    pass


class GraphConsumedError(NNError):
    """Raised on a second backward pass over a released graph."""
    pass


class NumericError(NNError):
    """Raised when a forward or backward pass produces NaN or Inf."""
    pass
