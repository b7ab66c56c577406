"""Dataset manifests: directory scanning, stratified split and CSV codec."""

import csv
import logging
import math
import os
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ClassCountMismatchError, ManifestError
from .image import IMAGE_EXTENSIONS, PathLike
from .rng import Xoshiro256

logger = logging.getLogger(__name__)

MANIFEST_HEADER = ["path", "class_id", "split"]


class Split(str, Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class SampleRecord:
    """One image in the dataset."""
    path: str
    class_id: int
    split: Optional[Split] = None  # None until split_stratified assigns it


@dataclass(frozen=True)
class DatasetManifest:
    """Ordered sample records plus the class label table."""
    records: Tuple[SampleRecord, ...]
    class_names: Tuple[str, ...]

    def __post_init__(self):
        n = len(self.class_names)
        for record in self.records:
            if not 0 <= record.class_id < n:
                raise ManifestError(
                    f"{record.path}: class_id {record.class_id} outside [0, {n})"
                )

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def subset(self, split: Split) -> List[SampleRecord]:
        """Records assigned to one split, in manifest order."""
        split = Split(split)
        return [r for r in self.records if r.split == split]

    def class_counts(self, split: Optional[Split] = None) -> List[int]:
        """Number of records per class, optionally restricted to one split."""
        counts = [0] * self.num_classes
        records = self.records if split is None else self.subset(split)
        for record in records:
            counts[record.class_id] += 1
        return counts

    def __len__(self) -> int:
        return len(self.records)

    def __repr__(self) -> str:
        return f"<DatasetManifest: {len(self.records)} records, {self.num_classes} classes>"


def build_manifest(
    root_dir: PathLike,
    expected_classes: int,
    extensions: Sequence[str] = IMAGE_EXTENSIONS,
) -> DatasetManifest:
    """
    Scan a `<root>/<class_name>/<image files>` tree.

    Class names are sorted lexicographically and numbered in that order;
    records are sorted by (class_id, path) so filesystem enumeration order
    never leaks into the manifest.

    Raises:
        ClassCountMismatchError: if the number of class directories differs
            from expected_classes
    """
    root = Path(root_dir)
    if not root.is_dir():
        raise ClassCountMismatchError(f"{root} is not a directory")

    class_dirs = sorted((d for d in root.iterdir() if d.is_dir()), key=lambda d: d.name)
    if len(class_dirs) != expected_classes:
        raise ClassCountMismatchError(
            f"Expected {expected_classes} class directories under {root}, found {len(class_dirs)}"
        )

    suffixes = {ext.lower() for ext in extensions}
    records: List[SampleRecord] = []
    for class_id, class_dir in enumerate(class_dirs):
        files = sorted(
            str(f) for f in class_dir.iterdir()
            if f.is_file() and f.suffix.lower() in suffixes
        )
        if not files:
            logger.warning(f"Class directory {class_dir} holds no images")
        records.extend(SampleRecord(path=f, class_id=class_id) for f in files)

    records.sort(key=lambda r: (r.class_id, r.path))
    manifest = DatasetManifest(
        records=tuple(records),
        class_names=tuple(d.name for d in class_dirs),
    )
    logger.info(f"Built manifest from {root}: {manifest}")
    return manifest


def split_stratified(m: DatasetManifest, train_fraction: float, seed: int) -> DatasetManifest:
    """
    Assign each record to train or test, class by class.

    Per class exactly floor(train_fraction * n_c) records go to train. The
    class's path-sorted list is shuffled with one xoshiro256** stream seeded
    from `seed` and consumed in class order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")

    rng = Xoshiro256(seed)
    by_class: Dict[int, List[int]] = {c: [] for c in range(m.num_classes)}
    for index, record in enumerate(m.records):
        by_class[record.class_id].append(index)

    assigned: Dict[int, Split] = {}
    for class_id in range(m.num_classes):
        indices = sorted(by_class[class_id], key=lambda i: m.records[i].path)
        n_train = math.floor(train_fraction * len(indices) + 1e-9)
        order = rng.shuffle(list(range(len(indices))))
        for rank, position in enumerate(order):
            assigned[indices[position]] = Split.TRAIN if rank < n_train else Split.TEST

    records = tuple(replace(r, split=assigned[i]) for i, r in enumerate(m.records))
    return DatasetManifest(records=records, class_names=m.class_names)


def write_manifest(m: DatasetManifest, path: PathLike, relative: bool = False) -> None:
    """
    Write the manifest as UTF-8 CSV with LF line endings.

    With relative=True record paths are written relative to the manifest's
    directory, which is how read_manifest resolves them.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    base = path.parent.resolve()
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        for record in m.records:
            split = record.split.value if record.split is not None else ""
            record_path = record.path
            if relative:
                record_path = Path(os.path.relpath(Path(record.path).resolve(), base)).as_posix()
            writer.writerow([record_path, record.class_id, split])


def _rows(path: Path) -> Iterable[Tuple[int, Dict[str, str]]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != MANIFEST_HEADER:
            raise ManifestError(
                f"{path}: header must be {','.join(MANIFEST_HEADER)}, got {reader.fieldnames}"
            )
        for line_no, row in enumerate(reader, start=2):
            yield line_no, row


def read_manifest(path: PathLike, class_names: Optional[Sequence[str]] = None) -> DatasetManifest:
    """
    Read a manifest CSV.

    Relative record paths are resolved against the manifest's directory.
    Without explicit class_names, each class is named after the parent
    directory of its records.
    """
    path = Path(path)
    base = path.parent
    records: List[SampleRecord] = []
    names: Dict[int, str] = {}

    for line_no, row in _rows(path):
        try:
            class_id = int(row["class_id"])
            split = Split(row["split"]) if row["split"] else None
        except ValueError as e:
            raise ManifestError(f"{path}:{line_no}: {e}") from e
        record_path = Path(row["path"])
        if not record_path.is_absolute():
            record_path = base / record_path
        records.append(SampleRecord(path=str(record_path), class_id=class_id, split=split))
        names.setdefault(class_id, record_path.parent.name)

    if class_names is None:
        n = max(names) + 1 if names else 0
        missing = [c for c in range(n) if c not in names]
        if missing:
            raise ManifestError(f"{path}: no records for class ids {missing}")
        class_names = [names[c] for c in range(n)]

    records.sort(key=lambda r: (r.class_id, r.path))
    return DatasetManifest(records=tuple(records), class_names=tuple(class_names))
