"""Experiment orchestration: data preparation, training, evaluation and curves."""

from .config import Config, TrainConfig
from .dataset import PreparedSplit, prepare_records, prepare_sample, preprocess_directory
from .errors import EmptySplitError, SampleError, TrainerError
from .evaluation import evaluate, predict
from .history import (
    EpochRecord,
    SplitMetrics,
    TrainingHistory,
    export_curves,
    load_history,
    save_history,
)
from .loop import TrainResult, make_batches, run_ablation, train
from .synth import grating, synth

__all__ = [
    "Config",
    "EmptySplitError",
    "EpochRecord",
    "PreparedSplit",
    "SampleError",
    "SplitMetrics",
    "TrainConfig",
    "TrainResult",
    "TrainerError",
    "TrainingHistory",
    "evaluate",
    "export_curves",
    "grating",
    "load_history",
    "make_batches",
    "predict",
    "prepare_records",
    "prepare_sample",
    "preprocess_directory",
    "run_ablation",
    "save_history",
    "synth",
    "train",
]
