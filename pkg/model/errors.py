"""Exceptions raised while building, saving and loading models."""


class ModelError(Exception):
    """Base class for model errors."""
    pass


class InvalidArchitectureError(ModelError):
    """Raised when an ArchConfig violates a structural rule."""
    pass


class VersionMismatchError(ModelError):
    """Raised when a checkpoint does not match the expected format or architecture."""
    pass


class CorruptCheckpointError(ModelError):
    """Raised on a truncated or malformed checkpoint file."""
    pass
