"""Per-epoch training history, its JSON file and the curve CSVs."""

import csv
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from metrics import MetricsReport

from .errors import TrainerError

logger = logging.getLogger(__name__)

HISTORY_VERSION = 1
METRIC_FAMILIES = ("accuracy", "precision", "recall", "f1", "loss", "kld")

PathLike = Union[str, os.PathLike]


@dataclass
class SplitMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    loss: float
    kld: float

    @classmethod
    def from_report(cls, report: MetricsReport) -> "SplitMetrics":
        return cls(
            accuracy=report.accuracy,
            precision=report.macro["precision"],
            recall=report.macro["recall"],
            f1=report.macro["f1"],
            loss=report.loss,
            kld=report.kld,
        )


@dataclass
class EpochRecord:
    epoch: int
    train: SplitMetrics
    test: SplitMetrics

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EpochRecord":
        return cls(
            epoch=int(data["epoch"]),
            train=SplitMetrics(**data["train"]),
            test=SplitMetrics(**data["test"]),
        )


@dataclass
class TrainingHistory:
    records: List[EpochRecord] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def best_epoch(self) -> Optional[int]:
        """Epoch of the highest test accuracy; the earliest one on ties."""
        best: Optional[EpochRecord] = None
        for record in self.records:
            if best is None or record.test.accuracy > best.test.accuracy:
                best = record
        return best.epoch if best is not None else None

    def record(self, epoch: int) -> EpochRecord:
        for r in self.records:
            if r.epoch == epoch:
                return r
        raise KeyError(f"No record for epoch {epoch}")

    def append(self, record: EpochRecord) -> None:
        self.records.append(record)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": HISTORY_VERSION,
            "config": self.config,
            "records": [asdict(r) for r in self.records],
            "best_epoch": self.best_epoch,
        }

    def __len__(self) -> int:
        return len(self.records)


def save_history(history: TrainingHistory, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(history.to_dict(), f, indent=2)


def load_history(path: PathLike) -> TrainingHistory:
    """
    Raises:
        TrainerError: unsupported version or malformed file
    """
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise TrainerError(f"{path}: not a history file ({e})") from e
    if data.get("version") != HISTORY_VERSION:
        raise TrainerError(f"{path}: unsupported history version {data.get('version')}")
    try:
        records = [EpochRecord.from_dict(r) for r in data["records"]]
    except (KeyError, TypeError) as e:
        raise TrainerError(f"{path}: malformed record ({e})") from e
    return TrainingHistory(records=records, config=data.get("config", {}))


def export_curves(history: TrainingHistory, out_dir: PathLike) -> List[Path]:
    """
    Write one `<family>.csv` per metric family with columns epoch,train,test.

    Raises:
        TrainerError: if the history is empty
    """
    if not history.records:
        raise TrainerError("Cannot export curves from an empty history")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    written = []
    for family in METRIC_FAMILIES:
        path = out / f"{family}.csv"
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["epoch", "train", "test"])
            for r in history.records:
                writer.writerow([
                    r.epoch,
                    repr(float(getattr(r.train, family))),
                    repr(float(getattr(r.test, family))),
                ])
        written.append(path)
    logger.info(f"Exported {len(written)} curve files to {out}")
    return written
