"""Dense tensor with reverse-mode automatic differentiation.

Every operation records its parents and a closure mapping the output
gradient to one gradient per parent (None where the parent needs none).
`backward` walks the graph in reverse topological order, accumulates leaf
gradients into `.grad` and then releases the graph.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import GraphConsumedError, NumericError, ShapeMismatchError

logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


def check_finite(data: np.ndarray, where: str) -> None:
    if not np.all(np.isfinite(data)):
        raise NumericError(f"Non-finite values produced by {where}")


class Tensor:
    """N-dimensional real array that can take part in a computation graph."""

    def __init__(self, data, requires_grad: bool = False, _op: str = ""):
        arr = np.asarray(data)
        if not np.issubdtype(arr.dtype, np.floating):
            arr = arr.astype(np.float64)
        self.data: np.ndarray = arr
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self._parents: Tuple["Tensor", ...] = ()
        self._backward: Optional[BackwardFn] = None
        self._op = _op
        self._consumed = False

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def dtype(self) -> np.dtype:
        return self.data.dtype

    @property
    def is_leaf(self) -> bool:
        return self._op == ""

    def item(self) -> float:
        return float(self.data)

    def numpy(self) -> np.ndarray:
        return self.data

    def zero_grad(self) -> None:
        self.grad = None

    def _topo_order(self) -> List["Tensor"]:
        order: List[Tensor] = []
        visited = set()
        stack: List[Tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in visited:
                    stack.append((parent, False))
        return order

    def backward(self, grad: Optional[np.ndarray] = None) -> None:
        """
        Populate `.grad` of every leaf reachable from this node.

        Args:
            grad: Seed gradient; defaults to 1 for scalar outputs

        Raises:
            GraphConsumedError: if this graph was already differentiated
        """
        if self._consumed:
            raise GraphConsumedError("Graph already consumed; run the forward pass again")
        if not self.requires_grad:
            raise ValueError("Tensor does not require grad")
        if grad is None:
            if self.size != 1:
                raise ShapeMismatchError(
                    f"Seed gradient required for non-scalar output of shape {self.shape}"
                )
            grad = np.ones_like(self.data)
        grad = np.asarray(grad, dtype=self.dtype)
        if grad.shape != self.shape:
            raise ShapeMismatchError(f"Seed gradient {grad.shape} != output {self.shape}")

        order = self._topo_order()
        grads: Dict[int, np.ndarray] = {id(self): grad}

        for node in reversed(order):
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node.is_leaf:
                if node.requires_grad:
                    node.grad = g.copy() if node.grad is None else node.grad + g
                continue
            if node._backward is None:
                raise GraphConsumedError(f"Node '{node._op}' was released by an earlier backward")
            parent_grads = node._backward(g)
            for parent, pg in zip(node._parents, parent_grads):
                if pg is None or not parent.requires_grad:
                    continue
                check_finite(pg, f"backward of {node._op}")
                key = id(parent)
                grads[key] = grads[key] + pg if key in grads else pg

        # Release the graph
        for node in order:
            if not node.is_leaf:
                node._backward = None
                node._parents = ()
        self._consumed = True

    def __repr__(self) -> str:
        op = f", op={self._op}" if self._op else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{op})"


def make_node(
    data: np.ndarray,
    parents: Sequence[Tensor],
    op: str,
    backward: BackwardFn,
) -> Tensor:
    """Wrap an op result; the graph is recorded only if a parent needs grad."""
    check_finite(data, op)
    requires = any(p.requires_grad for p in parents)
    out = Tensor(data, requires_grad=requires, _op=op)
    if requires:
        out._parents = tuple(parents)
        out._backward = backward
    return out


def as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)
