"""Orthonormal DCT-II, one- and two-dimensional.

The reference path evaluates each 1D transform as a dense cosine-matrix
product and applies it to all rows, then all columns. `dct2_fast` uses
scipy's FFT-based transform and must agree with it to 1e-9.
"""

from functools import lru_cache

import numpy as np
from scipy import fft as sp_fft

from imaging import FeatureMap


@lru_cache(maxsize=32)
def dct_matrix(n: int) -> np.ndarray:
    """C[k, n] = alpha(k) * cos(k*pi*(2n+1) / 2N); C is orthogonal."""
    if n < 1:
        raise ValueError(f"DCT length must be >= 1, got {n}")
    k = np.arange(n, dtype=np.float64)[:, None]
    i = np.arange(n, dtype=np.float64)[None, :]
    c = np.cos(k * np.pi * (2.0 * i + 1.0) / (2.0 * n))
    alpha = np.full((n, 1), np.sqrt(2.0 / n))
    alpha[0, 0] = 1.0 / np.sqrt(n)
    c = alpha * c
    c.setflags(write=False)
    return c


def dct1d(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 1:
        raise ValueError(f"Expected a non-empty vector, got shape {x.shape}")
    return dct_matrix(x.size) @ x


def dct2(img: FeatureMap) -> FeatureMap:
    """2D DCT: 1D transform of every row, then of every column."""
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 2 or min(a.shape) < 1:
        raise ValueError(f"Expected a non-empty 2D map, got shape {a.shape}")
    m, n = a.shape
    rows = a @ dct_matrix(n).T
    return dct_matrix(m) @ rows


def idct2(coeffs: FeatureMap) -> FeatureMap:
    c = np.asarray(coeffs, dtype=np.float64)
    if c.ndim != 2 or min(c.shape) < 1:
        raise ValueError(f"Expected a non-empty 2D map, got shape {c.shape}")
    m, n = c.shape
    return dct_matrix(m).T @ c @ dct_matrix(n)


def dct2_fast(img: FeatureMap) -> FeatureMap:
    return sp_fft.dctn(np.asarray(img, dtype=np.float64), type=2, norm="ortho")


def idct2_fast(coeffs: FeatureMap) -> FeatureMap:
    return sp_fft.idctn(np.asarray(coeffs, dtype=np.float64), type=2, norm="ortho")
