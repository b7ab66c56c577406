"""Exceptions raised while preparing data and running experiments."""


class TrainerError(Exception):
    """Base class for trainer errors."""
    pass


class EmptySplitError(TrainerError):
    """Raised when a requested split holds no samples."""
    pass


class SampleError(TrainerError):
    """Raised when one sample cannot be decoded or preprocessed."""

    def __init__(self, path: str, cause: Exception):
        self.path = path
        self.cause = cause
        super().__init__(f"{path}: {cause}")
