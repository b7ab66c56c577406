"""TVFM flat binary codec for preprocessed feature maps.

Layout (little-endian): magic b"TVFM", u32 version, u32 height, u32 width,
then height*width float64 values row-major.
"""

import os
import struct
from pathlib import Path
from typing import Union

import numpy as np

from imaging import FeatureMap

from .errors import FeatureMapFormatError

MAGIC = b"TVFM"
VERSION = 1
_HEADER = struct.Struct("<4sIII")


def encode_feature_map(fm: FeatureMap) -> bytes:
    arr = np.asarray(fm, dtype="<f8")
    if arr.ndim != 2:
        raise ValueError(f"Expected a 2D map, got shape {arr.shape}")
    h, w = arr.shape
    return _HEADER.pack(MAGIC, VERSION, h, w) + np.ascontiguousarray(arr).tobytes()


def decode_feature_map(data: bytes) -> FeatureMap:
    if len(data) < _HEADER.size:
        raise FeatureMapFormatError(f"Truncated header ({len(data)} bytes)")
    magic, version, h, w = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FeatureMapFormatError(f"Bad magic {magic!r}")
    if version != VERSION:
        raise FeatureMapFormatError(f"Unsupported TVFM version {version}")
    expected = _HEADER.size + 8 * h * w
    if len(data) != expected:
        raise FeatureMapFormatError(f"Expected {expected} bytes, got {len(data)}")
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    return values.reshape(h, w).astype(np.float64)


def write_feature_map(fm: FeatureMap, path: Union[str, os.PathLike]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_feature_map(fm))


def read_feature_map(path: Union[str, os.PathLike]) -> FeatureMap:
    return decode_feature_map(Path(path).read_bytes())
