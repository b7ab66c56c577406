"""Differentiable operations on Tensors.

Shapes follow the [batch, channels, height, width] convention for images and
[batch, features] for vectors. Convolution is valid (no padding) with
stride 1; max-pooling uses stride equal to the pool size.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import special

from .errors import BatchTooSmallError, DegenerateOutputError, ShapeMismatchError
from .tensor import Tensor, as_tensor, make_node

PROB_CLAMP = 1e-12
BN_EPS = 1e-5
BN_MOMENTUM = 0.9


# ---------------------------------------------------------------------
# Reductions
# ---------------------------------------------------------------------
def reduce_sum(x: Tensor, weights: Optional[np.ndarray] = None) -> Tensor:
    """Sum of all elements, optionally weighted elementwise by a constant."""
    x = as_tensor(x)
    if weights is None:
        w = np.ones_like(x.data)
    else:
        w = np.asarray(weights, dtype=x.dtype)
        if w.shape != x.shape:
            raise ShapeMismatchError(f"Weights {w.shape} do not match input {x.shape}")
    out = np.asarray((x.data * w).sum(), dtype=x.dtype)

    def backward(g):
        return (g * w,)

    return make_node(out, (x,), "reduce_sum", backward)


# ---------------------------------------------------------------------
# Activations
# ---------------------------------------------------------------------
def sigmoid(x: Tensor) -> Tensor:
    x = as_tensor(x)
    s = special.expit(x.data)

    def backward(g):
        return (g * s * (1.0 - s),)

    return make_node(s, (x,), "sigmoid", backward)


def relu(x: Tensor) -> Tensor:
    x = as_tensor(x)
    # Subgradient 0 at the kink
    mask = x.data > 0
    out = np.where(mask, x.data, 0).astype(x.dtype)

    def backward(g):
        return (g * mask,)

    return make_node(out, (x,), "relu", backward)


def softmax(x: Tensor) -> Tensor:
    """Row-wise softmax over the last axis, max-subtracted."""
    x = as_tensor(x)
    if x.ndim < 1 or x.shape[-1] < 1:
        raise ShapeMismatchError(f"Softmax needs a non-empty last axis, got {x.shape}")
    s = special.softmax(x.data, axis=-1)

    def backward(g):
        return (s * (g - (g * s).sum(axis=-1, keepdims=True)),)

    return make_node(s, (x,), "softmax", backward)


ACTIVATIONS = {
    "sigmoid": sigmoid,
    "relu": relu,
    "softmax": softmax,
}


def activate(x: Tensor, activation: Optional[str]) -> Tensor:
    if activation in (None, "", "linear", "identity"):
        return x
    try:
        return ACTIVATIONS[activation](x)
    except KeyError:
        raise ValueError(f"Unknown activation '{activation}'. Available: {list(ACTIVATIONS)}")


# ---------------------------------------------------------------------
# Convolution and pooling
# ---------------------------------------------------------------------
def conv2d(x: Tensor, filters: Tensor, bias: Tensor) -> Tensor:
    """
    Valid 2D cross-correlation, stride 1.

    Args:
        x: [batch, channels, m, n]
        filters: [k, channels, s, s]
        bias: [k]

    Returns:
        [batch, k, m - s + 1, n - s + 1]
    """
    x, filters, bias = as_tensor(x), as_tensor(filters), as_tensor(bias)
    if x.ndim != 4 or filters.ndim != 4:
        raise ShapeMismatchError(f"conv2d expects 4D input and filters, got {x.shape}, {filters.shape}")
    k, c, s, s2 = filters.shape
    if s != s2:
        raise ShapeMismatchError(f"Filters must be square, got {s}x{s2}")
    if x.shape[1] != c:
        raise ShapeMismatchError(f"Input has {x.shape[1]} channels, filters expect {c}")
    if x.shape[2] < s or x.shape[3] < s:
        raise ShapeMismatchError(f"Input {x.shape[2:]} smaller than kernel {s}x{s}")
    if bias.shape != (k,):
        raise ShapeMismatchError(f"Bias shape {bias.shape} != ({k},)")

    windows = sliding_window_view(x.data, (s, s), axis=(2, 3))  # B,C,Ho,Wo,s,s
    out = np.tensordot(windows, filters.data, axes=([1, 4, 5], [1, 2, 3]))  # B,Ho,Wo,K
    out = out.transpose(0, 3, 1, 2) + bias.data[None, :, None, None]
    out = np.ascontiguousarray(out)

    def backward(g):
        dx = dw = db = None
        if x.requires_grad:
            pad = s - 1
            gp = np.pad(g, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
            gwin = sliding_window_view(gp, (s, s), axis=(2, 3))  # B,K,H,W,s,s
            flipped = filters.data[:, :, ::-1, ::-1]
            dx = np.tensordot(gwin, flipped, axes=([1, 4, 5], [0, 2, 3]))  # B,H,W,C
            dx = np.ascontiguousarray(dx.transpose(0, 3, 1, 2))
        if filters.requires_grad:
            dw = np.tensordot(g, windows, axes=([0, 2, 3], [0, 2, 3]))  # K,C,s,s
        if bias.requires_grad:
            db = g.sum(axis=(0, 2, 3))
        return dx, dw, db

    return make_node(out, (x, filters, bias), "conv2d", backward)


def maxpool2d(x: Tensor, pool: int) -> Tensor:
    """Non-overlapping max-pooling; trailing rows/columns are dropped."""
    x = as_tensor(x)
    if x.ndim != 4:
        raise ShapeMismatchError(f"maxpool2d expects 4D input, got {x.shape}")
    if pool < 1:
        raise ValueError(f"Pool size must be >= 1, got {pool}")
    b, c, m, n = x.shape
    ho, wo = m // pool, n // pool
    if ho == 0 or wo == 0:
        raise DegenerateOutputError(f"Pool {pool} leaves no output for input {m}x{n}")

    cropped = x.data[:, :, :ho * pool, :wo * pool]
    blocks = (
        cropped.reshape(b, c, ho, pool, wo, pool)
        .transpose(0, 1, 2, 4, 3, 5)
        .reshape(b, c, ho, wo, pool * pool)
    )
    idx = blocks.argmax(axis=-1)
    out = np.take_along_axis(blocks, idx[..., None], axis=-1)[..., 0]

    def backward(g):
        gblocks = np.zeros_like(blocks)
        np.put_along_axis(gblocks, idx[..., None], g[..., None], axis=-1)
        gx = np.zeros_like(x.data)
        gx[:, :, :ho * pool, :wo * pool] = (
            gblocks.reshape(b, c, ho, wo, pool, pool)
            .transpose(0, 1, 2, 4, 3, 5)
            .reshape(b, c, ho * pool, wo * pool)
        )
        return (gx,)

    return make_node(out, (x,), "maxpool2d", backward)


# ---------------------------------------------------------------------
# Normalization and regularization
# ---------------------------------------------------------------------
@dataclass
class BatchNormState:
    """Per-channel running statistics."""
    running_mean: np.ndarray
    running_var: np.ndarray
    momentum: float = BN_MOMENTUM
    eps: float = BN_EPS

    @classmethod
    def create(cls, channels: int, dtype=np.float64) -> "BatchNormState":
        return cls(
            running_mean=np.zeros(channels, dtype=dtype),
            running_var=np.ones(channels, dtype=dtype),
        )


def _channel_axes(x: np.ndarray):
    if x.ndim == 2:
        return (0,), (1, -1)
    if x.ndim == 4:
        return (0, 2, 3), (1, -1, 1, 1)
    raise ShapeMismatchError(f"batchnorm expects 2D or 4D input, got {x.shape}")


def batchnorm(
    x: Tensor,
    gamma: Tensor,
    beta: Tensor,
    state: BatchNormState,
    training: bool,
) -> Tensor:
    """
    Per-channel batch normalization followed by the affine gamma, beta.

    Train mode standardizes with batch statistics and folds them into the
    running statistics; infer mode uses the running statistics only.

    Raises:
        BatchTooSmallError: train mode with fewer than two samples
    """
    x, gamma, beta = as_tensor(x), as_tensor(gamma), as_tensor(beta)
    axes, bshape = _channel_axes(x.data)
    channels = x.shape[1]
    if gamma.shape != (channels,) or beta.shape != (channels,):
        raise ShapeMismatchError(f"gamma/beta must have shape ({channels},)")

    if training:
        if x.shape[0] < 2:
            raise BatchTooSmallError(f"Batch norm in train mode needs >= 2 samples, got {x.shape[0]}")
        mean = x.data.mean(axis=axes)
        var = x.data.var(axis=axes)
        state.running_mean[...] = state.momentum * state.running_mean + (1 - state.momentum) * mean
        state.running_var[...] = state.momentum * state.running_var + (1 - state.momentum) * var
    else:
        mean = state.running_mean
        var = state.running_var

    inv_std = 1.0 / np.sqrt(var + state.eps)
    xhat = (x.data - mean.reshape(bshape)) * inv_std.reshape(bshape)
    out = (gamma.data.reshape(bshape) * xhat + beta.data.reshape(bshape)).astype(x.dtype)
    count = x.size // channels

    def backward(g):
        dgamma = (g * xhat).sum(axis=axes) if gamma.requires_grad else None
        dbeta = g.sum(axis=axes) if beta.requires_grad else None
        dx = None
        if x.requires_grad:
            dxhat = g * gamma.data.reshape(bshape)
            if training:
                sum_dxhat = dxhat.sum(axis=axes).reshape(bshape)
                sum_dxhat_xhat = (dxhat * xhat).sum(axis=axes).reshape(bshape)
                dx = (inv_std.reshape(bshape) / count) * (
                    count * dxhat - sum_dxhat - xhat * sum_dxhat_xhat
                )
            else:
                dx = dxhat * inv_std.reshape(bshape)
        return dx, dgamma, dbeta

    return make_node(out, (x, gamma, beta), "batchnorm", backward)


def dropout(
    x: Tensor,
    rate: float,
    training: bool,
    rng: Optional[np.random.Generator] = None,
) -> Tensor:
    """Inverted dropout: survivors are scaled by 1/(1-rate); infer mode is identity."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"Dropout rate must lie in [0, 1), got {rate}")
    x = as_tensor(x)
    if not training or rate == 0.0:
        return x
    if rng is None:
        raise ValueError("Train-mode dropout needs a random generator")
    mask = (rng.random(x.shape) >= rate).astype(x.dtype) / (1.0 - rate)
    out = x.data * mask

    def backward(g):
        return (g * mask,)

    return make_node(out, (x,), "dropout", backward)


# ---------------------------------------------------------------------
# Dense, reshaping and fusion
# ---------------------------------------------------------------------
def linear(i: Tensor, w: Tensor, b: Tensor) -> Tensor:
    """Affine map i @ W + b for i [batch, n_in], W [n_in, n_out], b [n_out]."""
    i, w, b = as_tensor(i), as_tensor(w), as_tensor(b)
    if i.ndim != 2 or w.ndim != 2 or i.shape[1] != w.shape[0]:
        raise ShapeMismatchError(f"Cannot multiply {i.shape} by {w.shape}")
    if b.shape != (w.shape[1],):
        raise ShapeMismatchError(f"Bias shape {b.shape} != ({w.shape[1]},)")
    out = i.data @ w.data + b.data

    def backward(g):
        di = g @ w.data.T if i.requires_grad else None
        dw = i.data.T @ g if w.requires_grad else None
        db = g.sum(axis=0) if b.requires_grad else None
        return di, dw, db

    return make_node(out, (i, w, b), "linear", backward)


def dense(i: Tensor, w: Tensor, b: Tensor, activation: Optional[str] = None) -> Tensor:
    """d = f(W^T i + b) applied row-wise over the batch."""
    return activate(linear(i, w, b), activation)


def flatten(x: Tensor) -> Tensor:
    x = as_tensor(x)
    shape = x.shape
    out = x.data.reshape(shape[0], -1)

    def backward(g):
        return (g.reshape(shape),)

    return make_node(out, (x,), "flatten", backward)


def concat(tensors: Sequence[Tensor], axis: int = 1) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    if not tensors:
        raise ShapeMismatchError("concat needs at least one tensor")
    try:
        out = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError as e:
        raise ShapeMismatchError(str(e)) from e
    bounds = np.cumsum([t.shape[axis] for t in tensors])[:-1]

    def backward(g):
        return tuple(np.split(g, bounds, axis=axis))

    return make_node(out, tuple(tensors), "concat", backward)


# ---------------------------------------------------------------------
# Losses
# ---------------------------------------------------------------------
def label_indices(labels, num_classes: int, batch: int) -> np.ndarray:
    """Accept class indices [batch] or one-hot rows [batch, J]."""
    arr = np.asarray(labels)
    if arr.ndim == 2:
        if arr.shape != (batch, num_classes):
            raise ShapeMismatchError(f"One-hot labels {arr.shape} != ({batch}, {num_classes})")
        arr = arr.argmax(axis=1)
    if arr.shape != (batch,):
        raise ShapeMismatchError(f"Expected {batch} labels, got shape {arr.shape}")
    arr = arr.astype(np.intp)
    if arr.size and (arr.min() < 0 or arr.max() >= num_classes):
        raise ShapeMismatchError(f"Labels must lie in [0, {num_classes})")
    return arr


def cross_entropy_loss(probs: Tensor, labels) -> Tensor:
    """Mean over the batch of -log(p[true class]), p clamped to >= 1e-12."""
    probs = as_tensor(probs)
    if probs.ndim != 2:
        raise ShapeMismatchError(f"Probabilities must be [batch, J], got {probs.shape}")
    batch, num_classes = probs.shape
    if not np.allclose(probs.data.sum(axis=1), 1.0, rtol=0.0, atol=1e-6):
        raise ValueError("Probability rows must sum to 1 within 1e-6")
    idx = label_indices(labels, num_classes, batch)
    rows = np.arange(batch)
    p_true = probs.data[rows, idx]
    clamped = np.maximum(p_true, PROB_CLAMP)
    out = np.asarray(-np.log(clamped).mean(), dtype=probs.dtype)

    def backward(g):
        grad = np.zeros_like(probs.data)
        live = p_true > PROB_CLAMP
        grad[rows[live], idx[live]] = -1.0 / (batch * p_true[live])
        return (grad * g,)

    return make_node(out, (probs,), "cross_entropy", backward)


def softmax_cross_entropy(logits: Tensor, labels) -> Tensor:
    """Fused softmax + cross-entropy; gradient is (probs - onehot) / batch."""
    logits = as_tensor(logits)
    if logits.ndim != 2:
        raise ShapeMismatchError(f"Logits must be [batch, J], got {logits.shape}")
    batch, num_classes = logits.shape
    idx = label_indices(labels, num_classes, batch)
    rows = np.arange(batch)
    probs = special.softmax(logits.data, axis=1)
    out = np.asarray(-np.log(np.maximum(probs[rows, idx], PROB_CLAMP)).mean(), dtype=logits.dtype)

    def backward(g):
        grad = probs.copy()
        grad[rows, idx] -= 1.0
        return (grad * (g / batch),)

    return make_node(out, (logits,), "softmax_cross_entropy", backward)
