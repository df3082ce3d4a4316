"""
Define-by-run reverse-mode differentiation over dense float64 arrays.

A graph is built fresh on every forward pass: each primitive in
`gramnets.autodiff.ops` returns a new `TensorNode` whose `op` records the
primitive name, its parents and a closure that pushes the output gradient
back into the parents. `backward` walks the graph once in reverse
topological order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from gramnets.core.errors import NonScalarRootError

logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], None]


@dataclass(frozen=True)
class OpRecord:
    """Provenance of a node: the primitive that produced it and its inputs."""
    name: str
    parents: Tuple["TensorNode", ...] = ()
    backward: Optional[BackwardFn] = field(default=None, repr=False, compare=False)


LEAF = OpRecord("leaf")


class TensorNode:
    """A value in the differentiation graph."""

    __slots__ = ("values", "_grad", "op", "requires_grad")

    def __init__(self, values, op: OpRecord = LEAF, requires_grad: bool = False):
        self.values = np.array(values, dtype=np.float64)
        self._grad: Optional[np.ndarray] = None
        self.op = op
        self.requires_grad = requires_grad

    @property
    def grad(self) -> np.ndarray:
        # Allocated on first read so forward-only graphs carry no gradient storage.
        if self._grad is None or self._grad.shape != self.values.shape:
            self._grad = np.zeros_like(self.values)
        return self._grad

    @grad.setter
    def grad(self, value: np.ndarray) -> None:
        self._grad = np.asarray(value, dtype=np.float64)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.values.shape

    def item(self) -> float:
        if self.values.size != 1:
            raise ValueError(f"item() on node of shape {self.shape}")
        return float(self.values.reshape(()))

    def zero_grad(self) -> None:
        self._grad = None

    def accumulate(self, g: np.ndarray) -> None:
        if self._grad is None:
            self._grad = np.broadcast_to(np.asarray(g, dtype=np.float64), self.values.shape).copy()
        else:
            self._grad = self._grad + g

    def set_values(self, values: np.ndarray) -> None:
        """Replace the data of a leaf; the gradient slot is reset to the new shape."""
        self.values = np.array(values, dtype=np.float64)
        self._grad = None

    def __repr__(self) -> str:
        return f"TensorNode(shape={self.shape}, op={self.op.name})"

    # Operator sugar delegates to the primitives in ops.
    def __add__(self, other):
        from gramnets.autodiff import ops
        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from gramnets.autodiff import ops
        return ops.sub(self, other)

    def __rsub__(self, other):
        from gramnets.autodiff import ops
        return ops.sub(other, self)

    def __mul__(self, other):
        from gramnets.autodiff import ops
        return ops.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        from gramnets.autodiff import ops
        return ops.div(self, other)

    def __rtruediv__(self, other):
        from gramnets.autodiff import ops
        return ops.div(other, self)

    def __neg__(self):
        from gramnets.autodiff import ops
        return ops.neg(self)

    def __matmul__(self, other):
        from gramnets.autodiff import ops
        return ops.matmul(self, other)


def as_node(x) -> TensorNode:
    """Wrap constants; nodes pass through unchanged."""
    if isinstance(x, TensorNode):
        return x
    return TensorNode(x)


def constant(x) -> TensorNode:
    return TensorNode(x, requires_grad=False)


def _topological_order(root: TensorNode) -> List[TensorNode]:
    order: List[TensorNode] = []
    visited = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in reversed(node.op.parents):
            if id(parent) not in visited:
                stack.append((parent, False))
    return order


def backward(root: TensorNode) -> None:
    """
    Populate `grad` of every node reachable from `root` with d(root)/d(node).

    Gradients of reachable nodes are reset before propagation, so repeated
    calls on fresh graphs never accumulate stale values. Nodes outside the
    graph are not touched; use `ParamCollection.zero_grad` for those.
    """
    if root.values.ndim > 1 or root.values.size != 1:
        raise NonScalarRootError(f"backward() needs a scalar root, got shape {root.shape}")
    order = _topological_order(root)
    for node in order:
        node.zero_grad()
    root.grad = np.ones_like(root.values)
    for node in reversed(order):
        if node.op.backward is not None and node.requires_grad:
            node.op.backward(node.grad)


@dataclass
class ParamTensor:
    """A named, optionally trainable leaf of a parameter collection."""
    name: str
    node: TensorNode
    trainable: bool = True

    @classmethod
    def create(cls, name: str, values: np.ndarray, trainable: bool = True) -> "ParamTensor":
        return cls(name=name, node=TensorNode(values, requires_grad=trainable), trainable=trainable)

    @property
    def values(self) -> np.ndarray:
        return self.node.values

    @property
    def grad(self) -> np.ndarray:
        return self.node.grad


class ParamCollection:
    """Ordered mapping of unique parameter names to `ParamTensor`s."""

    def __init__(self, params: Iterable[ParamTensor] = ()):
        self._params: Dict[str, ParamTensor] = {}
        for p in params:
            self.add(p)

    def add(self, param: ParamTensor) -> None:
        if param.name in self._params:
            raise ValueError(f"duplicate parameter name '{param.name}'")
        self._params[param.name] = param

    def __getitem__(self, name: str) -> ParamTensor:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[ParamTensor]:
        return iter(self._params.values())

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> List[str]:
        return list(self._params)

    def trainable(self) -> List[ParamTensor]:
        return [p for p in self._params.values() if p.trainable]

    def zero_grad(self) -> None:
        for p in self._params.values():
            p.node.zero_grad()

    def count(self) -> int:
        return int(sum(p.values.size for p in self._params.values()))

    def load(self, values: Dict[str, np.ndarray]) -> None:
        for name, arr in values.items():
            p = self._params[name]
            if np.shape(arr) != p.values.shape:
                raise ValueError(f"parameter '{name}': expected shape {p.values.shape}, got {np.shape(arr)}")
            p.node.set_values(arr)


def gradients(root: TensorNode, params: ParamCollection) -> Dict[str, np.ndarray]:
    """Run backward from `root` and return copies of the gradients of `params`."""
    params.zero_grad()
    backward(root)
    return {p.name: p.grad.copy() for p in params}
