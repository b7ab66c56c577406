"""Exceptions raised by the preprocessing front-ends."""


class PreprocessError(Exception):
    """Base class for preprocessing errors."""
    pass


class PadTooWideError(PreprocessError):
    """Raised when a reflection pad is at least as wide as the image."""
    pass


class InvalidFilterSpecError(PreprocessError):
    """Raised for even or too-small filter windows."""
    pass


class FeatureMapFormatError(PreprocessError):
    """Raised when a TVFM file has a bad magic, version or length."""
    pass
