"""Gradient-descent optimizers."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .tensor import Tensor

logger = logging.getLogger(__name__)

Params = Dict[str, Tensor]


@dataclass
class OptimizerState:
    """Learning rate, Adam hyperparameters and per-parameter moments."""
    kind: str
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    moments: Dict[str, Tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)


class BaseOptimizer(ABC):
    """Abstract base class for optimizers."""

    name: str

    def __init__(self, state: OptimizerState):
        self.state = state

    @abstractmethod
    def step(self, params: Params) -> None:
        """
        Update every parameter that holds a gradient, in place.

        Args:
            params: Named parameter tensors
        """
        pass

    def zero_grad(self, params: Params) -> None:
        for p in params.values():
            p.zero_grad()

    def __repr__(self) -> str:
        return f"<Optimizer: {self.name} (lr {self.state.lr})>"


class SGD(BaseOptimizer):
    name = "sgd"

    def step(self, params: Params) -> None:
        self.state.step += 1
        for p in params.values():
            if p.grad is not None:
                p.data -= self.state.lr * p.grad


class Adam(BaseOptimizer):
    """Bias-corrected Adam."""

    name = "adam"

    def step(self, params: Params) -> None:
        s = self.state
        s.step += 1
        correction1 = 1.0 - s.beta1 ** s.step
        correction2 = 1.0 - s.beta2 ** s.step
        for name, p in params.items():
            if p.grad is None:
                continue
            if name not in s.moments:
                s.moments[name] = (np.zeros_like(p.data), np.zeros_like(p.data))
            m, v = s.moments[name]
            m *= s.beta1
            m += (1.0 - s.beta1) * p.grad
            v *= s.beta2
            v += (1.0 - s.beta2) * p.grad * p.grad
            m_hat = m / correction1
            v_hat = v / correction2
            p.data -= (s.lr * m_hat / (np.sqrt(v_hat) + s.eps)).astype(p.dtype)


OPTIMIZERS = {"sgd": SGD, "adam": Adam}


def create_optimizer(kind: str, lr: float, **kwargs) -> BaseOptimizer:
    if kind not in OPTIMIZERS:
        raise ValueError(f"Optimizer '{kind}' not found. Available: {list(OPTIMIZERS)}")
    return OPTIMIZERS[kind](OptimizerState(kind=kind, lr=lr, **kwargs))
