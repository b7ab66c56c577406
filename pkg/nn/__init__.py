"""Dense-tensor reverse-mode autodiff with the layers the classifier needs."""

from . import functional
from .errors import (
    BatchTooSmallError,
    DegenerateOutputError,
    GraphConsumedError,
    NNError,
    NumericError,
    ShapeMismatchError,
)
from .functional import (
    BatchNormState,
    batchnorm,
    concat,
    conv2d,
    cross_entropy_loss,
    dense,
    dropout,
    flatten,
    maxpool2d,
    relu,
    sigmoid,
    softmax,
    softmax_cross_entropy,
)
from .gradcheck import GRADCHECK_CASES, GradCheckResult, run_gradcheck
from .init import glorot_uniform
from .layers import LAYER_KINDS, BaseLayer, LayerSpec, Shape
from .optim import SGD, Adam, BaseOptimizer, OptimizerState, create_optimizer
from .registry import LayerRegistry, create_layer_registry
from .tensor import Tensor, as_tensor

__all__ = [
    "Adam",
    "BaseLayer",
    "BaseOptimizer",
    "BatchNormState",
    "BatchTooSmallError",
    "DegenerateOutputError",
    "GRADCHECK_CASES",
    "GradCheckResult",
    "GraphConsumedError",
    "LAYER_KINDS",
    "LayerRegistry",
    "LayerSpec",
    "NNError",
    "NumericError",
    "OptimizerState",
    "SGD",
    "Shape",
    "ShapeMismatchError",
    "Tensor",
    "as_tensor",
    "batchnorm",
    "concat",
    "conv2d",
    "create_layer_registry",
    "create_optimizer",
    "cross_entropy_loss",
    "dense",
    "dropout",
    "flatten",
    "functional",
    "glorot_uniform",
    "maxpool2d",
    "relu",
    "run_gradcheck",
    "sigmoid",
    "softmax",
    "softmax_cross_entropy",
]
