"""Local standard-deviation filtering over symmetric-padded windows."""

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from imaging import FeatureMap

from .errors import InvalidFilterSpecError, PadTooWideError

PAD_MODE = "symmetric"


@dataclass(frozen=True)
class FilterSpec:
    """Sliding window geometry. pad_width keeps output size equal to input size."""
    window_size: int = 3
    pad_width: int = field(init=False)
    pad_mode: str = PAD_MODE

    def __post_init__(self):
        if self.window_size < 3 or self.window_size % 2 == 0:
            raise InvalidFilterSpecError(
                f"window_size must be odd and >= 3, got {self.window_size}"
            )
        if self.pad_mode != PAD_MODE:
            raise InvalidFilterSpecError(f"Only symmetric padding is supported, got {self.pad_mode}")
        object.__setattr__(self, "pad_width", (self.window_size - 1) // 2)

    @property
    def pixel_count(self) -> int:
        return self.window_size * self.window_size


def _as_map(img: FeatureMap) -> np.ndarray:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"Expected a 2D feature map, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Feature map contains NaN or Inf")
    return arr


def symmetric_pad(img: FeatureMap, k: int) -> FeatureMap:
    """
    Mirror-pad by k on every side, repeating the edge row/column.

    Raises:
        PadTooWideError: if k >= min(height, width)
    """
    arr = _as_map(img)
    if k < 0:
        raise ValueError(f"Pad width must be >= 0, got {k}")
    if k == 0:
        return arr.copy()
    if k >= min(arr.shape):
        raise PadTooWideError(f"Pad width {k} needs an image larger than {arr.shape}")
    return np.pad(arr, k, mode=PAD_MODE)


def _windows(img_padded: np.ndarray, spec: FilterSpec) -> np.ndarray:
    if min(img_padded.shape) < spec.window_size:
        raise ValueError(
            f"Padded image {img_padded.shape} smaller than window {spec.window_size}"
        )
    return sliding_window_view(img_padded, (spec.window_size, spec.window_size))


def local_mean(img_padded: FeatureMap, spec: FilterSpec) -> FeatureMap:
    """Mean of every window over an already padded image."""
    windows = _windows(_as_map(img_padded), spec)
    return windows.sum(axis=(-2, -1)) / spec.pixel_count


def local_std_filter(img: FeatureMap, spec: FilterSpec = FilterSpec()) -> FeatureMap:
    """
    Population standard deviation of each pixel's neighbourhood.

    Deviations are taken relative to the window centre before the two-pass
    variance, so a constant window gives exactly 0.
    """
    padded = symmetric_pad(img, spec.pad_width)
    windows = _windows(padded, spec)
    k = spec.pad_width
    centre = windows[..., k:k + 1, k:k + 1]
    shifted = windows - centre
    mean = shifted.sum(axis=(-2, -1), keepdims=True) / spec.pixel_count
    variance = ((shifted - mean) ** 2).sum(axis=(-2, -1)) / spec.pixel_count
    return np.sqrt(variance)
