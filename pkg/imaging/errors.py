"""Exceptions raised while decoding images and building datasets."""


class ImageError(Exception):
    """Base class for image and dataset errors."""
    pass


class UnsupportedFormatError(ImageError):
    """Raised for containers, channel layouts or bit depths we do not decode."""
    pass


class CorruptFileError(ImageError):
    """Raised when a file is truncated or its header is invalid."""
    pass


class DegenerateInputError(ImageError):
    """Raised when an image is too small for the requested operation."""
    pass


class ClassCountMismatchError(ImageError):
    """Raised when the dataset root does not hold the expected number of classes."""
    pass


class ManifestError(ImageError):
    """Raised for malformed manifest files."""
    pass
