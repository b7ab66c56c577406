"""TVCK checkpoint codec.

Layout (little-endian):
    magic b"TVCK", u32 version, u64 blob length, blob
    repeated records: u32 name length, name (utf-8), u32 ndim, u64 dims..., float64 data

The blob is the architecture text, a `---` separator line and a JSON
metadata object.
"""

import json
import logging
import os
import struct
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .arch import ArchConfig, parse_arch
from .errors import CorruptCheckpointError, InvalidArchitectureError, VersionMismatchError
from .network import TwoBranchNetwork, build_model

logger = logging.getLogger(__name__)

MAGIC = b"TVCK"
VERSION = 1
SEPARATOR = "\n---\n"

_HEADER = struct.Struct("<4sIQ")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


def encode_checkpoint(model: TwoBranchNetwork, metadata: Optional[Dict] = None) -> bytes:
    meta = dict(model.metadata)
    meta.update(metadata or {})
    blob = (model.cfg.to_text() + SEPARATOR + json.dumps(meta, sort_keys=True)).encode("utf-8")

    parts = [_HEADER.pack(MAGIC, VERSION, len(blob)), blob]
    for name, arr in model.named_arrays().items():
        raw = name.encode("utf-8")
        parts.append(_U32.pack(len(raw)))
        parts.append(raw)
        parts.append(_U32.pack(arr.ndim))
        parts.extend(_U64.pack(d) for d in arr.shape)
        parts.append(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptCheckpointError(
                f"Truncated checkpoint: need {n} bytes at offset {self.pos}, have {len(self.data) - self.pos}"
            )
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: struct.Struct) -> Tuple:
        return fmt.unpack(self.take(fmt.size))

    @property
    def done(self) -> bool:
        return self.pos == len(self.data)


def decode_checkpoint(data: bytes) -> Tuple[ArchConfig, Dict, Dict[str, np.ndarray]]:
    """
    Split a checkpoint into (architecture, metadata, named arrays).

    Raises:
        CorruptCheckpointError: bad magic, truncation or malformed blob
        VersionMismatchError: unsupported container version
    """
    reader = _Reader(data)
    magic, version, blob_len = reader.unpack(_HEADER)
    if magic != MAGIC:
        raise CorruptCheckpointError(f"Bad magic {magic!r}")
    if version != VERSION:
        raise VersionMismatchError(f"Checkpoint version {version} unsupported (expected {VERSION})")

    try:
        arch_text, meta_text = reader.take(blob_len).decode("utf-8").split(SEPARATOR, 1)
        cfg = parse_arch(arch_text)
        metadata = json.loads(meta_text)
    except (UnicodeDecodeError, ValueError, InvalidArchitectureError) as e:
        raise CorruptCheckpointError(f"Malformed checkpoint header: {e}") from e

    arrays: Dict[str, np.ndarray] = {}
    while not reader.done:
        (name_len,) = reader.unpack(_U32)
        try:
            name = reader.take(name_len).decode("utf-8")
        except UnicodeDecodeError as e:
            raise CorruptCheckpointError(f"Bad record name: {e}") from e
        (ndim,) = reader.unpack(_U32)
        shape = tuple(reader.unpack(_U64)[0] for _ in range(ndim))
        count = int(np.prod(shape)) if shape else 1
        values = np.frombuffer(reader.take(8 * count), dtype="<f8")
        arrays[name] = values.reshape(shape).astype(np.float64)
    return cfg, metadata, arrays


def save_checkpoint(
    model: TwoBranchNetwork,
    path: Union[str, os.PathLike],
    metadata: Optional[Dict] = None,
) -> None:
    """Write the model, merging `metadata` over model.metadata."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_checkpoint(model, metadata))
    logger.debug(f"Saved checkpoint to {path}")


def load_checkpoint(
    path: Union[str, os.PathLike],
    expected_arch: Optional[ArchConfig] = None,
) -> TwoBranchNetwork:
    """
    Rebuild a model from a checkpoint file.

    Args:
        path: Checkpoint location
        expected_arch: When given, the stored architecture must equal it

    Raises:
        CorruptCheckpointError: malformed or truncated file
        VersionMismatchError: version or architecture disagreement
    """
    path = Path(path)
    cfg, metadata, arrays = decode_checkpoint(path.read_bytes())
    if expected_arch is not None and expected_arch.to_text() != cfg.to_text():
        raise VersionMismatchError(f"{path}: stored architecture differs from the expected one")

    model = build_model(cfg, seed=metadata.get("seed", 0), precision=metadata.get("precision", "float64"))
    expected = list(model.named_arrays())
    if set(arrays) < set(expected):
        # Records end on a boundary but some are absent
        raise CorruptCheckpointError(f"{path}: truncated after {len(arrays)} of {len(expected)} records")
    model.load_arrays(arrays)
    model.metadata.update(metadata)
    logger.info(f"Loaded {model} from {path}")
    return model
