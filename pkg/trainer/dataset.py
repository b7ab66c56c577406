"""Turn manifest records into branch input stacks, with an on-disk cache."""

import hashlib
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from imaging import DEFAULT_SIZE, IMAGE_EXTENSIONS, ImageError, SampleRecord, load_image
from preprocess import (
    FilterSpec,
    PreprocessError,
    branch_inputs,
    read_feature_map,
    write_feature_map,
)

from .errors import SampleError

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]
PREPROCESS_MODES = ("stdfilt", "dct", "both")


@dataclass
class PreparedSplit:
    """Stacked branch inputs for one split, in record order."""
    x1: np.ndarray  # [N, 1, size, size] std-filter maps
    x2: np.ndarray  # [N, 1, size, size] DCT maps
    labels: np.ndarray
    paths: List[str]

    def __len__(self) -> int:
        return len(self.labels)


def cache_key(
    path: PathLike,
    size: int,
    signed_log: bool,
    spec: FilterSpec = FilterSpec(),
    fast_dct: bool = False,
) -> str:
    """Digest of the source file identity and every preprocessing parameter."""
    path = Path(path).resolve()
    stat = path.stat()
    ident = (
        f"{path}|{stat.st_size}|{stat.st_mtime_ns}|{size}|{int(signed_log)}"
        f"|{spec.window_size}|{spec.pad_mode}|{int(fast_dct)}"
    )
    return hashlib.sha1(ident.encode("utf-8")).hexdigest()


def prepare_sample(
    path: PathLike,
    size: int = DEFAULT_SIZE,
    signed_log: bool = False,
    cache_dir: Optional[PathLike] = None,
    fast_dct: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Compute (or read back) the std-filter and DCT maps for one image.

    Returns:
        Tuple of two size x size float64 maps
    """
    if cache_dir is not None:
        key = cache_key(path, size, signed_log, fast_dct=fast_dct)
        std_file = Path(cache_dir) / f"{key}.std.tvfm"
        dct_file = Path(cache_dir) / f"{key}.dct.tvfm"
        if std_file.exists() and dct_file.exists():
            logger.debug(f"Cache hit for {path}")
            return read_feature_map(std_file), read_feature_map(dct_file)

    std_map, dct_map = branch_inputs(
        load_image(path), size=size, signed_log_dct=signed_log, fast_dct=fast_dct,
    )

    if cache_dir is not None:
        write_feature_map(std_map, std_file)
        write_feature_map(dct_map, dct_file)
    return std_map, dct_map


def _prepare_job(job: Tuple[str, int, bool, Optional[str], bool]) -> Tuple[np.ndarray, np.ndarray]:
    path, size, signed_log, cache_dir, fast_dct = job
    return prepare_sample(path, size, signed_log, cache_dir, fast_dct)


def _map_jobs(jobs: Sequence[Tuple], threads: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Run jobs in order; a failure is re-raised as SampleError naming its path."""
    results = []
    if threads <= 0:
        for job in jobs:
            try:
                results.append(_prepare_job(job))
            except (ImageError, PreprocessError, OSError) as e:
                raise SampleError(job[0], e) from e
        return results

    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_prepare_job, job) for job in jobs]
        for job, future in zip(jobs, futures):
            try:
                results.append(future.result())
            except (ImageError, PreprocessError, OSError) as e:
                raise SampleError(job[0], e) from e
    return results


def prepare_records(
    records: Sequence[SampleRecord],
    size: int = DEFAULT_SIZE,
    signed_log: bool = False,
    cache_dir: Optional[PathLike] = None,
    threads: int = 0,
) -> PreparedSplit:
    """
    Preprocess a list of records into stacked branch inputs.

    Args:
        records: Samples in the order they should appear
        size: Side length of both maps
        signed_log: Apply signed_log to DCT maps
        cache_dir: TVFM cache directory; None disables caching
        threads: Worker processes; 0 runs in-process

    Raises:
        SampleError: wrapping the first failing sample's error
    """
    cache = str(cache_dir) if cache_dir is not None else None
    if cache is not None:
        Path(cache).mkdir(parents=True, exist_ok=True)
    jobs = [(r.path, size, signed_log, cache, False) for r in records]
    maps = _map_jobs(jobs, threads)

    n = len(records)
    x1 = np.empty((n, 1, size, size), dtype=np.float64)
    x2 = np.empty((n, 1, size, size), dtype=np.float64)
    for i, (std_map, dct_map) in enumerate(maps):
        x1[i, 0] = std_map
        x2[i, 0] = dct_map
    labels = np.array([r.class_id for r in records], dtype=np.int64)
    logger.info(f"Prepared {n} samples at {size}x{size}")
    return PreparedSplit(x1=x1, x2=x2, labels=labels, paths=[r.path for r in records])


def preprocess_directory(
    input_dir: PathLike,
    out_dir: PathLike,
    mode: str = "both",
    size: int = DEFAULT_SIZE,
    signed_log: bool = False,
    threads: int = 0,
    fast_dct: bool = False,
) -> int:
    """
    Write TVFM maps for every image below input_dir, mirroring its layout.

    Each `<rel>/<name>.<ext>` becomes `<rel>/<name>.std.tvfm` and/or
    `<rel>/<name>.dct.tvfm` under out_dir. fast_dct switches the DCT map to
    the scipy transform; both paths agree to floating-point rounding.

    Returns:
        Number of images processed
    """
    if mode not in PREPROCESS_MODES:
        raise ValueError(f"mode must be one of {PREPROCESS_MODES}, got '{mode}'")
    root, out = Path(input_dir), Path(out_dir)
    suffixes = {ext.lower() for ext in IMAGE_EXTENSIONS}
    images = sorted(p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in suffixes)

    jobs = [(str(p), size, signed_log, None, fast_dct) for p in images]
    for image, (std_map, dct_map) in zip(images, _map_jobs(jobs, threads)):
        target = out / image.relative_to(root).with_suffix("")
        if mode in ("stdfilt", "both"):
            write_feature_map(std_map, target.with_name(target.name + ".std.tvfm"))
        if mode in ("dct", "both"):
            write_feature_map(dct_map, target.with_name(target.name + ".dct.tvfm"))
    logger.info(f"Preprocessed {len(images)} images from {root} into {out}")
    return len(images)
