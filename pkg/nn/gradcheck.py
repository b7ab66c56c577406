"""Finite-difference gradient checks for every differentiable op.

Each case builds random float64 inputs and a scalar loss over them. The
analytic gradient from `backward` is compared against central differences.
Cases call ops through the `functional` module attribute so a broken op can
be swapped in from a test.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from . import functional as F
from .tensor import Tensor

logger = logging.getLogger(__name__)

STEP = 1e-5
TOLERANCE = 1e-4
REL_FLOOR = 1e-4
DEFAULT_SEEDS = 10

Inputs = Dict[str, np.ndarray]
LossFn = Callable[[Dict[str, Tensor]], Tensor]
CaseBuilder = Callable[[np.random.Generator], Tuple[Inputs, LossFn]]


@dataclass
class GradCheckResult:
    """Outcome of one op's check across all seeds."""
    name: str
    max_rel_error: float
    worst_input: str
    seeds: int
    tolerance: float = TOLERANCE

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tolerance

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name:<24} max rel err {self.max_rel_error:.3e} ({self.worst_input})"


def _projection(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.normal(size=shape)


def _projected(out: Tensor, weights: np.ndarray) -> Tensor:
    # Random projection turns any output into a scalar with a generic gradient
    return F.reduce_sum(out, weights)


def _away_from_zero(rng: np.random.Generator, shape, margin: float = 0.1) -> np.ndarray:
    magnitude = rng.uniform(margin, 1.0, size=shape)
    return magnitude * rng.choice([-1.0, 1.0], size=shape)


def _distinct(rng: np.random.Generator, shape, spacing: float = 0.1) -> np.ndarray:
    # Distinct values keep every argmax stable under a +/- STEP perturbation
    return rng.permutation(int(np.prod(shape))).reshape(shape) * spacing


def _case_conv2d(rng):
    inputs = {
        "x": rng.normal(size=(2, 2, 5, 6)),
        "filters": rng.normal(size=(3, 2, 3, 3)),
        "bias": rng.normal(size=3),
    }
    weights = _projection(rng, (2, 3, 3, 4))
    return inputs, lambda t: _projected(F.conv2d(t["x"], t["filters"], t["bias"]), weights)


def _case_dense(rng):
    inputs = {
        "i": rng.normal(size=(3, 4)),
        "w": rng.normal(size=(4, 5)),
        "b": rng.normal(size=5),
    }
    weights = _projection(rng, (3, 5))
    return inputs, lambda t: _projected(F.dense(t["i"], t["w"], t["b"], "sigmoid"), weights)


def _case_sigmoid(rng):
    inputs = {"x": rng.normal(scale=2.0, size=(3, 4))}
    weights = _projection(rng, (3, 4))
    return inputs, lambda t: _projected(F.sigmoid(t["x"]), weights)


def _case_relu(rng):
    inputs = {"x": _away_from_zero(rng, (3, 4))}
    weights = _projection(rng, (3, 4))
    return inputs, lambda t: _projected(F.relu(t["x"]), weights)


def _case_softmax(rng):
    inputs = {"x": rng.normal(size=(3, 5))}
    weights = _projection(rng, (3, 5))
    return inputs, lambda t: _projected(F.softmax(t["x"]), weights)


def _case_softmax_cross_entropy(rng):
    inputs = {"logits": rng.normal(size=(4, 5))}
    labels = rng.integers(0, 5, size=4)
    return inputs, lambda t: F.softmax_cross_entropy(t["logits"], labels)


def _case_maxpool2d(rng):
    inputs = {"x": _distinct(rng, (2, 2, 7, 7))}
    weights = _projection(rng, (2, 2, 2, 2))
    return inputs, lambda t: _projected(F.maxpool2d(t["x"], 3), weights)


def _case_batchnorm(rng):
    inputs = {
        "x": rng.normal(size=(4, 2, 3, 3)),
        "gamma": rng.uniform(0.5, 1.5, size=2),
        "beta": rng.normal(size=2),
    }
    weights = _projection(rng, (4, 2, 3, 3))

    def loss(t):
        # Fresh running stats so repeated evaluations see identical state
        state = F.BatchNormState.create(2)
        return _projected(F.batchnorm(t["x"], t["gamma"], t["beta"], state, True), weights)

    return inputs, loss


def _case_dropout(rng):
    inputs = {"x": rng.normal(size=(4, 6))}
    weights = _projection(rng, (4, 6))
    mask_seed = int(rng.integers(0, 2**31))

    def loss(t):
        return _projected(F.dropout(t["x"], 0.5, True, np.random.default_rng(mask_seed)), weights)

    return inputs, loss


def _case_concat(rng):
    inputs = {"a": rng.normal(size=(2, 3)), "b": rng.normal(size=(2, 4))}
    weights = _projection(rng, (2, 7))
    return inputs, lambda t: _projected(F.concat([t["a"], t["b"]], axis=1), weights)


GRADCHECK_CASES: Dict[str, CaseBuilder] = {
    "conv2d": _case_conv2d,
    "dense": _case_dense,
    "sigmoid": _case_sigmoid,
    "relu": _case_relu,
    "softmax": _case_softmax,
    "softmax_cross_entropy": _case_softmax_cross_entropy,
    "maxpool2d": _case_maxpool2d,
    "batchnorm": _case_batchnorm,
    "dropout": _case_dropout,
    "concat": _case_concat,
}


def _evaluate(loss_fn: LossFn, inputs: Inputs) -> float:
    return loss_fn({k: Tensor(v) for k, v in inputs.items()}).item()


def numeric_gradient(loss_fn: LossFn, inputs: Inputs, name: str, step: float = STEP) -> np.ndarray:
    """Central-difference gradient of the loss with respect to inputs[name]."""
    target = inputs[name]
    grad = np.zeros_like(target)
    it = np.nditer(target, flags=["multi_index"])
    for _ in it:
        index = it.multi_index
        original = target[index]
        target[index] = original + step
        plus = _evaluate(loss_fn, inputs)
        target[index] = original - step
        minus = _evaluate(loss_fn, inputs)
        target[index] = original
        grad[index] = (plus - minus) / (2 * step)
    return grad


def analytic_gradients(loss_fn: LossFn, inputs: Inputs) -> Dict[str, np.ndarray]:
    tensors = {k: Tensor(v.copy(), requires_grad=True) for k, v in inputs.items()}
    loss_fn(tensors).backward()
    return {
        k: t.grad if t.grad is not None else np.zeros_like(t.data)
        for k, t in tensors.items()
    }


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """max |a - n| / max(REL_FLOOR, |a|, |n|) over all elements."""
    denom = np.maximum(REL_FLOOR, np.maximum(np.abs(analytic), np.abs(numeric)))
    return float(np.max(np.abs(analytic - numeric) / denom))


def check_case(name: str, seed: int) -> Tuple[float, str]:
    """
    Run one case at one seed.

    Returns:
        Tuple of (max relative error, name of the worst input)
    """
    if name not in GRADCHECK_CASES:
        raise ValueError(f"Gradcheck case '{name}' not found. Available: {list(GRADCHECK_CASES)}")
    rng = np.random.default_rng(seed)
    inputs, loss_fn = GRADCHECK_CASES[name](rng)
    inputs = {k: np.asarray(v, dtype=np.float64) for k, v in inputs.items()}

    analytic = analytic_gradients(loss_fn, inputs)
    worst, worst_input = 0.0, ""
    for key in inputs:
        err = relative_error(analytic[key], numeric_gradient(loss_fn, inputs, key))
        if err >= worst:
            worst, worst_input = err, key
    return worst, worst_input


def run_gradcheck(
    names: Optional[Iterable[str]] = None,
    seeds: int = DEFAULT_SEEDS,
    tolerance: float = TOLERANCE,
) -> List[GradCheckResult]:
    """
    Check every named op (default: all) across `seeds` random draws.

    Returns:
        One GradCheckResult per op, in case order
    """
    results = []
    for name in (names if names is not None else GRADCHECK_CASES):
        worst, worst_input = 0.0, ""
        for seed in range(seeds):
            err, key = check_case(name, seed)
            if err >= worst:
                worst, worst_input = err, key
        result = GradCheckResult(name, worst, worst_input, seeds, tolerance)
        logger.info(str(result))
        results.append(result)
    return results
