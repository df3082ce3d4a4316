"""
Differentiable primitives.

Every function takes `TensorNode`s (or array-likes, treated as constants)
and returns a new node whose backward closure implements the exact
reverse rule. Binary elementwise primitives broadcast row vectors (1, n)
and column vectors (m, 1) against matrices the way numpy does.
"""
from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import lapack, lu_factor, lu_solve
from scipy.spatial.distance import cdist
from scipy.special import expit, log_expit

from gramnets.autodiff.tensor import OpRecord, TensorNode, as_node
from gramnets.core.errors import ShapeError, SingularMatrixError

# Reciprocal condition numbers below this make a solve meaningless in float64.
SINGULAR_RCOND = np.finfo(np.float64).eps


def _make(values: np.ndarray, name: str, parents: Sequence[TensorNode], backward) -> TensorNode:
    requires_grad = any(p.requires_grad for p in parents)
    op = OpRecord(name, tuple(parents), backward if requires_grad else None)
    return TensorNode(values, op=op, requires_grad=requires_grad)


def _unbroadcast(grad: np.ndarray, shape) -> np.ndarray:
    """Sum `grad` down to `shape`, undoing numpy broadcasting."""
    if grad.shape == tuple(shape):
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(name: str, a: TensorNode, b: TensorNode):
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(name, a.shape, b.shape) from None


def _full_sum(x: np.ndarray) -> float:
    # Correctly rounded, so the result does not depend on element order.
    return math.fsum(x.ravel().tolist())


# --- elementwise binary --------------------------------------------------

def add(a, b) -> TensorNode:
    a, b = as_node(a), as_node(b)
    _broadcast_shape("add", a, b)

    def _backward(g):
        if a.requires_grad:
            a.accumulate(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b.accumulate(_unbroadcast(g, b.shape))

    return _make(a.values + b.values, "add", (a, b), _backward)


def sub(a, b) -> TensorNode:
    a, b = as_node(a), as_node(b)
    _broadcast_shape("sub", a, b)

    def _backward(g):
        if a.requires_grad:
            a.accumulate(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b.accumulate(_unbroadcast(-g, b.shape))

    return _make(a.values - b.values, "sub", (a, b), _backward)


def mul(a, b) -> TensorNode:
    a, b = as_node(a), as_node(b)
    _broadcast_shape("mul", a, b)

    def _backward(g):
        if a.requires_grad:
            a.accumulate(_unbroadcast(g * b.values, a.shape))
        if b.requires_grad:
            b.accumulate(_unbroadcast(g * a.values, b.shape))

    return _make(a.values * b.values, "mul", (a, b), _backward)


def div(a, b) -> TensorNode:
    a, b = as_node(a), as_node(b)
    _broadcast_shape("div", a, b)
    out = a.values / b.values

    def _backward(g):
        if a.requires_grad:
            a.accumulate(_unbroadcast(g / b.values, a.shape))
        if b.requires_grad:
            b.accumulate(_unbroadcast(-g * out / b.values, b.shape))

    return _make(out, "div", (a, b), _backward)


# --- elementwise unary ---------------------------------------------------

def neg(x) -> TensorNode:
    x = as_node(x)

    def _backward(g):
        x.accumulate(-g)

    return _make(-x.values, "neg", (x,), _backward)


def affine(x, scale: float, shift: float = 0.0) -> TensorNode:
    """scale * x + shift with scalar constants."""
    x = as_node(x)

    def _backward(g):
        x.accumulate(scale * g)

    return _make(scale * x.values + shift, "affine", (x,), _backward)


def exp(x) -> TensorNode:
    x = as_node(x)
    out = np.exp(x.values)

    def _backward(g):
        x.accumulate(g * out)

    return _make(out, "exp", (x,), _backward)


def square(x) -> TensorNode:
    x = as_node(x)

    def _backward(g):
        x.accumulate(2.0 * g * x.values)

    return _make(x.values * x.values, "square", (x,), _backward)


def relu(x) -> TensorNode:
    x = as_node(x)
    mask = x.values > 0

    def _backward(g):
        x.accumulate(g * mask)

    return _make(np.where(mask, x.values, 0.0), "relu", (x,), _backward)


def clip_min(x, floor: float = 0.0) -> TensorNode:
    """max(x, floor) elementwise; clipped entries pass no gradient."""
    x = as_node(x)
    mask = x.values > floor

    def _backward(g):
        x.accumulate(g * mask)

    return _make(np.where(mask, x.values, floor), "clip_min", (x,), _backward)


def tanh(x) -> TensorNode:
    x = as_node(x)
    out = np.tanh(x.values)

    def _backward(g):
        x.accumulate(g * (1.0 - out * out))

    return _make(out, "tanh", (x,), _backward)


def sigmoid(x) -> TensorNode:
    x = as_node(x)
    out = expit(x.values)

    def _backward(g):
        x.accumulate(g * out * (1.0 - out))

    return _make(out, "sigmoid", (x,), _backward)


def log_sigmoid(x) -> TensorNode:
    """log(sigmoid(x)) without overflow for large |x|."""
    x = as_node(x)
    out = log_expit(x.values)

    def _backward(g):
        x.accumulate(g * expit(-x.values))

    return _make(out, "log_sigmoid", (x,), _backward)


# --- linear algebra ------------------------------------------------------

def matmul(a, b) -> TensorNode:
    a, b = as_node(a), as_node(b)
    if a.values.ndim != 2 or b.values.ndim not in (1, 2) or a.shape[1] != b.shape[0]:
        raise ShapeError("matmul", a.shape, b.shape)

    def _backward(g):
        if a.requires_grad:
            if b.values.ndim == 1:
                a.accumulate(np.outer(g, b.values))
            else:
                a.accumulate(g @ b.values.T)
        if b.requires_grad:
            b.accumulate(a.values.T @ g)

    return _make(a.values @ b.values, "matmul", (a, b), _backward)


def solve(A, B) -> TensorNode:
    """
    X = A^-1 B by LU with partial pivoting.

    Reverse rule uses the adjoint system: grad_B = A^-T grad_X and
    grad_A = -grad_B X^T, reusing the forward factorization.
    """
    A, B = as_node(A), as_node(B)
    if A.values.ndim != 2 or A.shape[0] != A.shape[1] or B.values.ndim not in (1, 2) \
            or B.shape[0] != A.shape[0]:
        raise ShapeError("solve", A.shape, B.shape)
    if not np.all(np.isfinite(A.values)):
        raise SingularMatrixError("solve: matrix has non-finite entries", math.inf)

    lu, piv = lu_factor(A.values, check_finite=False)
    anorm = np.linalg.norm(A.values, 1)
    rcond, _ = lapack.dgecon(lu, anorm, norm="1")
    if not np.all(np.diag(lu)) or rcond < SINGULAR_RCOND:
        condition = math.inf if rcond == 0 else 1.0 / rcond
        raise SingularMatrixError(f"solve: singular {A.shape[0]}x{A.shape[1]} system", condition)
    X = lu_solve((lu, piv), B.values, check_finite=False)

    def _backward(g):
        grad_B = lu_solve((lu, piv), g, trans=1, check_finite=False)
        if B.requires_grad:
            B.accumulate(grad_B)
        if A.requires_grad:
            if X.ndim == 1:
                A.accumulate(-np.outer(grad_B, X))
            else:
                A.accumulate(-grad_B @ X.T)

    return _make(X, "solve", (A, B), _backward)


def add_diagonal(A, value: float) -> TensorNode:
    """A + value * I for a square A."""
    A = as_node(A)
    if A.values.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError("add_diagonal", A.shape)

    def _backward(g):
        A.accumulate(g)

    return _make(A.values + value * np.eye(A.shape[0]), "add_diagonal", (A,), _backward)


def pairwise_sq_dist(X, Y) -> TensorNode:
    """Matrix of squared Euclidean distances between the rows of X and of Y."""
    X, Y = as_node(X), as_node(Y)
    if X.values.ndim != 2 or Y.values.ndim != 2 or X.shape[1] != Y.shape[1]:
        raise ShapeError("pairwise_sq_dist", X.shape, Y.shape)
    D = np.maximum(cdist(X.values, Y.values, "sqeuclidean"), 0.0)

    def _backward(g):
        if X is Y:
            gs = g + g.T
            X.accumulate(2.0 * (X.values * gs.sum(axis=1, keepdims=True) - gs @ X.values))
            return
        if X.requires_grad:
            X.accumulate(2.0 * (X.values * g.sum(axis=1, keepdims=True) - g @ Y.values))
        if Y.requires_grad:
            Y.accumulate(2.0 * (Y.values * g.sum(axis=0)[:, None] - g.T @ X.values))

    return _make(D, "pairwise_sq_dist", (X, Y), _backward)


def concat_rows(blocks: Sequence) -> TensorNode:
    """Stack row blocks with equal column counts."""
    nodes = [as_node(b) for b in blocks]
    if not nodes:
        raise ShapeError("concat_rows", (), detail="no blocks")
    cols = {n.shape[1:] for n in nodes}
    if len(cols) != 1 or nodes[0].values.ndim != 2:
        raise ShapeError("concat_rows", *(n.shape for n in nodes))
    offsets = np.cumsum([0] + [n.shape[0] for n in nodes])

    def _backward(g):
        for node, lo, hi in zip(nodes, offsets[:-1], offsets[1:]):
            if node.requires_grad:
                node.accumulate(g[lo:hi])

    return _make(np.concatenate([n.values for n in nodes], axis=0), "concat_rows", nodes, _backward)


# --- reductions ----------------------------------------------------------

def sum(x, axis: Optional[int] = None, keepdims: bool = False) -> TensorNode:  # noqa: A001
    x = as_node(x)
    if axis is None:
        out = np.array(_full_sum(x.values))
        if keepdims:
            out = out.reshape((1,) * x.values.ndim)
    else:
        out = x.values.sum(axis=axis, keepdims=keepdims)

    def _backward(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        x.accumulate(np.broadcast_to(g, x.shape).copy())

    return _make(out, "sum", (x,), _backward)


def mean(x, axis: Optional[int] = None, keepdims: bool = False) -> TensorNode:
    x = as_node(x)
    count = x.values.size if axis is None else x.shape[axis]
    return affine(sum(x, axis=axis, keepdims=keepdims), 1.0 / count)
