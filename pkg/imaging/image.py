"""Grayscale image decoding, encoding and resampling."""

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptFileError, DegenerateInputError, UnsupportedFormatError

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]

# Real-valued 2D matrix, row-major float64
FeatureMap = np.ndarray

# Pillow format names we accept; PGM is reported as "PPM"
SUPPORTED_FORMATS = ("TIFF", "PNG", "PPM")
IMAGE_EXTENSIONS = (".tif", ".tiff", ".png", ".pgm")

DEFAULT_SIZE = 128


@dataclass(frozen=True)
class RawImage:
    """8-bit grayscale raster exactly as stored on disk."""
    height: int
    width: int
    pixels: np.ndarray  # (height, width) uint8, row-major

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise DegenerateInputError(
                f"Image must be at least 1x1, got {self.height}x{self.width}"
            )
        if self.pixels.shape != (self.height, self.width):
            raise ValueError(
                f"Pixel buffer shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}"
            )
        if self.pixels.dtype != np.uint8:
            raise ValueError(f"Pixels must be uint8, got {self.pixels.dtype}")

    @classmethod
    def from_array(cls, pixels: np.ndarray) -> "RawImage":
        """Build a RawImage from a 2D integer array in [0, 255]."""
        arr = np.asarray(pixels)
        if arr.ndim != 2:
            raise UnsupportedFormatError(f"Expected a 2D array, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise UnsupportedFormatError("Pixel values must lie in [0, 255]")
        arr = np.ascontiguousarray(arr, dtype=np.uint8)
        return cls(height=arr.shape[0], width=arr.shape[1], pixels=arr)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.height, self.width)

    def __repr__(self) -> str:
        return f"<RawImage: {self.height}x{self.width}>"


def load_image(path: PathLike) -> RawImage:
    """
    Decode an 8-bit single-channel TIFF, PNG or PGM file.

    Args:
        path: Image file location

    Returns:
        RawImage with pixel values exactly as stored

    Raises:
        UnsupportedFormatError: multi-channel, >8-bit or compressed TIFF input
        CorruptFileError: truncated file or invalid header
    """
    path = Path(path)
    try:
        with Image.open(path) as img:
            if img.format not in SUPPORTED_FORMATS:
                raise UnsupportedFormatError(f"{path}: unsupported container {img.format}")
            if img.format == "TIFF":
                compression = img.info.get("compression", "raw")
                if compression != "raw":
                    raise UnsupportedFormatError(
                        f"{path}: compressed TIFF ({compression}) must be converted offline"
                    )
            if img.mode != "L":
                raise UnsupportedFormatError(
                    f"{path}: expected 8-bit grayscale, got mode {img.mode}"
                )
            img.load()
            pixels = np.array(img, dtype=np.uint8)
    except (UnsupportedFormatError, FileNotFoundError):
        raise
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as e:
        raise CorruptFileError(f"{path}: {e}") from e

    logger.debug(f"Decoded {path} ({pixels.shape[0]}x{pixels.shape[1]})")
    return RawImage(height=pixels.shape[0], width=pixels.shape[1], pixels=pixels)


def save_pgm(img: RawImage, path: PathLike) -> None:
    """Write a binary (P5) PGM. Parent directories are created."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(img.pixels).save(path, format="PPM")


def normalize(img: RawImage) -> FeatureMap:
    """Scale pixels to [0, 1] as float64."""
    return img.pixels.astype(np.float64) / 255.0


def _axis_coords(n_in: int, n_out: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Half-pixel-centre source coordinates for one axis.

    Returns:
        Tuple of (lower index, upper index, fractional weight)
    """
    src = (np.arange(n_out, dtype=np.float64) + 0.5) * (n_in / n_out) - 0.5
    src = np.clip(src, 0.0, n_in - 1)
    lo = np.minimum(np.floor(src).astype(np.intp), n_in - 2)
    return lo, lo + 1, src - lo


def resize_bilinear(
    img: FeatureMap,
    out_h: int = DEFAULT_SIZE,
    out_w: int = DEFAULT_SIZE,
) -> FeatureMap:
    """
    Bilinear resampling of a real-valued image.

    Interpolation uses the lerp form a + t*(b - a), so constant regions stay
    exactly constant and no output leaves the input value range.

    Raises:
        DegenerateInputError: if either input dimension is below 2
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or min(img.shape) < 2:
        raise DegenerateInputError(f"Resize needs at least 2x2 input, got shape {img.shape}")
    if out_h < 1 or out_w < 1:
        raise ValueError(f"Output size must be positive, got {out_h}x{out_w}")

    h, w = img.shape
    if (h, w) == (out_h, out_w):
        return img.copy()

    y0, y1, wy = _axis_coords(h, out_h)
    x0, x1, wx = _axis_coords(w, out_w)

    rows0 = img[y0]
    rows1 = img[y1]
    top = rows0[:, x0] + wx * (rows0[:, x1] - rows0[:, x0])
    bottom = rows1[:, x0] + wx * (rows1[:, x1] - rows1[:, x0])
    return top + wy[:, None] * (bottom - top)
