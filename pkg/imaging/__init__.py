"""Grayscale image decoding, dataset manifests and splits."""

from .errors import (
    ClassCountMismatchError,
    CorruptFileError,
    DegenerateInputError,
    ImageError,
    ManifestError,
    UnsupportedFormatError,
)
from .image import (
    DEFAULT_SIZE,
    FeatureMap,
    IMAGE_EXTENSIONS,
    RawImage,
    load_image,
    normalize,
    resize_bilinear,
    save_pgm,
)
from .manifest import (
    DatasetManifest,
    SampleRecord,
    Split,
    build_manifest,
    read_manifest,
    split_stratified,
    write_manifest,
)
from .rng import Xoshiro256

__all__ = [
    "ClassCountMismatchError",
    "CorruptFileError",
    "DEFAULT_SIZE",
    "DatasetManifest",
    "DegenerateInputError",
    "FeatureMap",
    "IMAGE_EXTENSIONS",
    "ImageError",
    "ManifestError",
    "RawImage",
    "SampleRecord",
    "Split",
    "UnsupportedFormatError",
    "Xoshiro256",
    "build_manifest",
    "load_image",
    "normalize",
    "read_manifest",
    "resize_bilinear",
    "save_pgm",
    "split_stratified",
    "write_manifest",
]
