"""Parameterized layers built from LayerSpecs."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from . import functional as F
from .errors import ShapeMismatchError
from .init import glorot_uniform
from .tensor import Tensor

# Shapes exclude the batch axis: (channels, height, width) or (features,)
Shape = Tuple[int, ...]

LAYER_KINDS = (
    "conv2d", "sigmoid", "relu", "softmax", "maxpool2d",
    "batchnorm", "dropout", "dense", "flatten", "concat",
)


@dataclass(frozen=True)
class LayerSpec:
    """Declarative description of one layer."""
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise ValueError(f"Unknown layer kind '{self.kind}'. Available: {list(LAYER_KINDS)}")

    def get(self, key: str, default: Any = None) -> Any:
        return self.params.get(key, default)

    def __hash__(self) -> int:
        return hash((self.kind, tuple(sorted(self.params.items()))))

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"<LayerSpec: {self.kind}({args})>"


class BaseLayer(ABC):
    """Abstract base class for network layers."""

    kind: str

    def __init__(self, spec: LayerSpec, in_shape: Shape):
        self.spec = spec
        self.in_shape = tuple(in_shape)
        self.out_shape = self.output_shape(spec, self.in_shape)

    @staticmethod
    @abstractmethod
    def output_shape(spec: LayerSpec, in_shape: Shape) -> Shape:
        """
        Compute the per-sample output shape.

        Raises:
            ShapeMismatchError: if the input shape is incompatible
        """
        pass

    @staticmethod
    def count_parameters(spec: LayerSpec, in_shape: Shape) -> int:
        """Number of trainable scalars for this spec at this input shape."""
        return 0

    @abstractmethod
    def forward(self, x: Tensor, training: bool) -> Tensor:
        pass

    def parameters(self) -> Dict[str, Tensor]:
        return {}

    def buffers(self) -> Dict[str, np.ndarray]:
        return {}

    def __repr__(self) -> str:
        return f"<Layer: {self.kind} {self.in_shape} -> {self.out_shape}>"


def _require_ndim(kind: str, in_shape: Shape, ndim: int) -> None:
    if len(in_shape) != ndim:
        raise ShapeMismatchError(f"{kind} expects {ndim}D samples, got {in_shape}")


class Conv2D(BaseLayer):
    kind = "conv2d"

    def __init__(self, spec: LayerSpec, in_shape: Shape, rng: np.random.Generator, dtype=np.float64):
        super().__init__(spec, in_shape)
        filters, size = spec.get("filters"), spec.get("kernel", 3)
        channels = in_shape[0]
        fan_in, fan_out = channels * size * size, filters * size * size
        self.activation: Optional[str] = spec.get("activation")
        self.weight = Tensor(
            glorot_uniform((filters, channels, size, size), fan_in, fan_out, rng, dtype),
            requires_grad=True,
        )
        self.bias = Tensor(np.zeros(filters, dtype=dtype), requires_grad=True)

    @staticmethod
    def output_shape(spec, in_shape):
        _require_ndim("conv2d", in_shape, 3)
        size = spec.get("kernel", 3)
        _, m, n = in_shape
        if m < size or n < size:
            raise ShapeMismatchError(f"conv2d kernel {size} larger than input {m}x{n}")
        return (spec.get("filters"), m - size + 1, n - size + 1)

    @staticmethod
    def count_parameters(spec, in_shape):
        size = spec.get("kernel", 3)
        filters = spec.get("filters")
        return filters * in_shape[0] * size * size + filters

    def forward(self, x, training):
        return F.activate(F.conv2d(x, self.weight, self.bias), self.activation)

    def parameters(self):
        return {"weight": self.weight, "bias": self.bias}


class Dense(BaseLayer):
    kind = "dense"

    def __init__(self, spec: LayerSpec, in_shape: Shape, rng: np.random.Generator, dtype=np.float64):
        super().__init__(spec, in_shape)
        width = spec.get("units")
        self.activation: Optional[str] = spec.get("activation")
        self.weight = Tensor(
            glorot_uniform((in_shape[0], width), in_shape[0], width, rng, dtype),
            requires_grad=True,
        )
        self.bias = Tensor(np.zeros(width, dtype=dtype), requires_grad=True)

    @staticmethod
    def output_shape(spec, in_shape):
        _require_ndim("dense", in_shape, 1)
        return (spec.get("units"),)

    @staticmethod
    def count_parameters(spec, in_shape):
        return in_shape[0] * spec.get("units") + spec.get("units")

    def forward(self, x, training, activate: bool = True):
        return F.dense(x, self.weight, self.bias, self.activation if activate else None)

    def parameters(self):
        return {"weight": self.weight, "bias": self.bias}


class MaxPool2D(BaseLayer):
    kind = "maxpool2d"

    def __init__(self, spec: LayerSpec, in_shape: Shape, rng=None, dtype=np.float64):
        super().__init__(spec, in_shape)
        self.pool = spec.get("pool", 3)

    @staticmethod
    def output_shape(spec, in_shape):
        _require_ndim("maxpool2d", in_shape, 3)
        pool = spec.get("pool", 3)
        c, m, n = in_shape
        if m // pool == 0 or n // pool == 0:
            raise ShapeMismatchError(f"maxpool2d pool {pool} leaves no output for {m}x{n}")
        return (c, m // pool, n // pool)

    def forward(self, x, training):
        return F.maxpool2d(x, self.pool)


class BatchNorm(BaseLayer):
    kind = "batchnorm"

    def __init__(self, spec: LayerSpec, in_shape: Shape, rng=None, dtype=np.float64):
        super().__init__(spec, in_shape)
        channels = in_shape[0]
        self.gamma = Tensor(np.ones(channels, dtype=dtype), requires_grad=True)
        self.beta = Tensor(np.zeros(channels, dtype=dtype), requires_grad=True)
        self.state = F.BatchNormState.create(channels, dtype)

    @staticmethod
    def output_shape(spec, in_shape):
        if len(in_shape) not in (1, 3):
            raise ShapeMismatchError(f"batchnorm expects 1D or 3D samples, got {in_shape}")
        return tuple(in_shape)

    @staticmethod
    def count_parameters(spec, in_shape):
        return 2 * in_shape[0]

    def forward(self, x, training):
        return F.batchnorm(x, self.gamma, self.beta, self.state, training)

    def parameters(self):
        return {"gamma": self.gamma, "beta": self.beta}

    def buffers(self):
        return {"running_mean": self.state.running_mean, "running_var": self.state.running_var}


class Dropout(BaseLayer):
    kind = "dropout"

    def __init__(self, spec: LayerSpec, in_shape: Shape, rng=None, dtype=np.float64):
        super().__init__(spec, in_shape)
        self.rate = spec.get("rate", 0.5)
        if not 0.0 <= self.rate < 1.0:
            raise ValueError(f"Dropout rate must lie in [0, 1), got {self.rate}")
        # Shared generator, assigned by the owning network
        self.rng: Optional[np.random.Generator] = None

    @staticmethod
    def output_shape(spec, in_shape):
        return tuple(in_shape)

    def forward(self, x, training):
        return F.dropout(x, self.rate, training, self.rng)


class Flatten(BaseLayer):
    kind = "flatten"

    def __init__(self, spec: LayerSpec, in_shape: Shape, rng=None, dtype=np.float64):
        super().__init__(spec, in_shape)

    @staticmethod
    def output_shape(spec, in_shape):
        return (int(np.prod(in_shape)),)

    def forward(self, x, training):
        return F.flatten(x)


class Activation(BaseLayer):
    """Standalone sigmoid, relu or softmax."""

    def __init__(self, spec: LayerSpec, in_shape: Shape, rng=None, dtype=np.float64):
        super().__init__(spec, in_shape)
        self.kind = spec.kind

    @staticmethod
    def output_shape(spec, in_shape):
        return tuple(in_shape)

    def forward(self, x, training):
        return F.activate(x, self.kind)
