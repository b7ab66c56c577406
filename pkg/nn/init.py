"""Seeded weight initializers."""

from typing import Tuple

import numpy as np


def glorot_uniform(
    shape: Tuple[int, ...],
    fan_in: int,
    fan_out: int,
    rng: np.random.Generator,
    dtype=np.float64,
) -> np.ndarray:
    """Uniform in [-limit, limit] with limit = sqrt(6 / (fan_in + fan_out))."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)
