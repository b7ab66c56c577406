"""Configuration for the TEM virus classifier."""

import os
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, Optional

from dotenv import load_dotenv

# Load .env first, then .env.local overrides
load_dotenv()
load_dotenv(".env.local", override=True)

PRECISIONS = ("float64", "float32")
OPTIMIZERS = ("adam", "sgd")


class Config:
    """Run configuration loaded from environment variables."""

    # Worker pool (0 = single-threaded deterministic mode)
    THREADS: int = int(os.getenv("TEMVIRO_THREADS", "0"))

    # Training
    EPOCHS: int = int(os.getenv("TEMVIRO_EPOCHS", "100"))
    BATCH_SIZE: int = int(os.getenv("TEMVIRO_BATCH_SIZE", "32"))
    LEARNING_RATE: float = float(os.getenv("TEMVIRO_LR", "1e-3"))
    OPTIMIZER: str = os.getenv("TEMVIRO_OPTIMIZER", "adam")
    SEED: int = int(os.getenv("TEMVIRO_SEED", "0"))
    TRAIN_FRACTION: float = float(os.getenv("TEMVIRO_TRAIN_FRACTION", "0.75"))
    PRECISION: str = os.getenv("TEMVIRO_PRECISION", "float64")

    # Preprocessing
    DCT_SIGNED_LOG: bool = os.getenv("TEMVIRO_DCT_SIGNED_LOG", "false").lower() == "true"
    NUM_CLASSES: int = int(os.getenv("TEMVIRO_NUM_CLASSES", "14"))

    # Paths and logging
    ARCH_CONFIG: str = os.getenv("TEMVIRO_ARCH_CONFIG", "configs/default.cfg")
    LOG_LEVEL: str = os.getenv("TEMVIRO_LOG_LEVEL", "INFO")

    @classmethod
    def validate_threads(cls) -> bool:
        """Check the worker count is non-negative."""
        return cls.THREADS >= 0

    @classmethod
    def validate_training(cls) -> bool:
        """Check epochs, batch size, learning rate and split fraction."""
        return all([
            cls.EPOCHS >= 1,
            cls.BATCH_SIZE >= 2,
            cls.LEARNING_RATE > 0,
            0.0 < cls.TRAIN_FRACTION < 1.0,
        ])

    @classmethod
    def validate_precision(cls) -> bool:
        return cls.PRECISION in PRECISIONS and cls.OPTIMIZER in OPTIMIZERS

    @classmethod
    def validate_dataset(cls) -> bool:
        """Check the expected class count leaves something to classify."""
        return cls.NUM_CLASSES >= 2

    @classmethod
    @contextmanager
    def override(cls, **kwargs: Any) -> Iterator[None]:
        """Temporarily override config values.

        Usage:
            with Config.override(THREADS=0, PRECISION="float64"):
                train(cfg, manifest)
            # Original values are restored
        """
        original: Dict[str, Any] = {}
        for key in kwargs:
            if hasattr(cls, key):
                original[key] = getattr(cls, key)
            else:
                raise ValueError(f"Unknown config key: {key}")

        try:
            for key, value in kwargs.items():
                setattr(cls, key, value)
            yield
        finally:
            for key, value in original.items():
                setattr(cls, key, value)


@dataclass
class TrainConfig:
    """Everything one training run depends on, besides the data."""
    arch_path: str = field(default_factory=lambda: Config.ARCH_CONFIG)
    mode: Optional[str] = None  # None keeps the architecture file's MODE
    epochs: int = field(default_factory=lambda: Config.EPOCHS)
    batch_size: int = field(default_factory=lambda: Config.BATCH_SIZE)
    optimizer: str = field(default_factory=lambda: Config.OPTIMIZER)
    learning_rate: float = field(default_factory=lambda: Config.LEARNING_RATE)
    seed: int = field(default_factory=lambda: Config.SEED)
    train_fraction: float = field(default_factory=lambda: Config.TRAIN_FRACTION)
    precision: str = field(default_factory=lambda: Config.PRECISION)
    signed_log: bool = field(default_factory=lambda: Config.DCT_SIGNED_LOG)
    threads: int = field(default_factory=lambda: Config.THREADS)
    eval_batch_size: int = 64

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 2:
            raise ValueError(f"batch_size must be >= 2 for batch normalization, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}, got '{self.optimizer}'")
        if self.precision not in PRECISIONS:
            raise ValueError(f"precision must be one of {PRECISIONS}, got '{self.precision}'")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if self.threads < 0:
            raise ValueError(f"threads must be >= 0, got {self.threads}")

    @classmethod
    def from_config(cls, **overrides: Any) -> "TrainConfig":
        """Config defaults, replaced by every override that is not None."""
        return cls(**{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
