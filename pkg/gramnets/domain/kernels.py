"""
RBF kernel mixtures, Gram matrices and the biased (V-statistic) MMD.

Convention: k(x, y) = sum_b exp(-||x - y||^2 / (2 sigma_b^2)). Mixtures are
summed, not averaged, so k(x, x) equals the number of bandwidths and every
MMD value scales with it.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from gramnets.autodiff import ops
from gramnets.autodiff.tensor import TensorNode, as_node
from gramnets.core.errors import ShapeError
from gramnets.models.specs import KernelSpec

EVAL_BLOCK = 1024


def pairwise_sq_dist(X, Y) -> TensorNode:
    """Entry (i, j) is ||X_i - Y_j||^2, clamped at zero."""
    return ops.pairwise_sq_dist(X, Y)


def rbf_from_sq_dist(D: TensorNode, spec: KernelSpec) -> TensorNode:
    if not spec.bandwidths:
        raise ValueError("kernel needs at least one bandwidth")
    terms = [ops.exp(ops.affine(D, -1.0 / (2.0 * s * s))) for s in spec.bandwidths]
    out = terms[0]
    for t in terms[1:]:
        out = ops.add(out, t)
    return out


def rbf_gram(X, Y, spec: KernelSpec) -> TensorNode:
    """Gram matrix of the RBF mixture between the rows of X and Y."""
    return rbf_from_sq_dist(pairwise_sq_dist(X, Y), spec)


@dataclass
class GramPair:
    """
    Gram matrices over projected generated (q) and data (p) samples.

    K_pp is only needed for the MMD terms and may be omitted.
    """
    K_qq: TensorNode
    K_qp: TensorNode
    K_pp: Optional[TensorNode] = None

    @property
    def m(self) -> int:
        return self.K_qq.shape[0]

    @property
    def n(self) -> int:
        return self.K_qp.shape[1]


def gram_pair(Y_q, Y_p, spec: KernelSpec, with_pp: bool = True) -> GramPair:
    Y_q, Y_p = as_node(Y_q), as_node(Y_p)
    return GramPair(
        K_qq=rbf_gram(Y_q, Y_q, spec),
        K_qp=rbf_gram(Y_q, Y_p, spec),
        K_pp=rbf_gram(Y_p, Y_p, spec) if with_pp else None,
    )


def mmd2_biased(K_xx, K_xy, K_yy) -> TensorNode:
    """
    (1/N^2) sum K_xx - (2/NM) sum K_xy + (1/M^2) sum K_yy.

    K_xx is N x N, K_yy is M x M and K_xy is N x M.
    """
    K_xx, K_xy, K_yy = as_node(K_xx), as_node(K_xy), as_node(K_yy)
    n, m = K_xy.shape if K_xy.values.ndim == 2 else (-1, -1)
    if K_xx.shape != (n, n) or K_yy.shape != (m, m):
        raise ShapeError("mmd2_biased", K_xx.shape, K_xy.shape, K_yy.shape)
    return ops.add(ops.sub(ops.mean(K_xx), ops.affine(ops.mean(K_xy), 2.0)), ops.mean(K_yy))


def mmd2_from_pair(pair: GramPair) -> TensorNode:
    """MMD^2 between the data (p) and generated (q) sides of a GramPair."""
    if pair.K_pp is None:
        raise ValueError("GramPair has no K_pp block")
    # K_qp is M x N; the statistic is symmetric in its two samples.
    return mmd2_biased(pair.K_qq, pair.K_qp, pair.K_pp)


def _gram_mean(X: np.ndarray, Y: np.ndarray, spec: KernelSpec) -> float:
    # Row blocks keep memory bounded; block sums are combined with fsum.
    coefs = [1.0 / (2.0 * s * s) for s in spec.bandwidths]
    blocks = []
    for lo in range(0, X.shape[0], EVAL_BLOCK):
        D = np.maximum(cdist(X[lo:lo + EVAL_BLOCK], Y, "sqeuclidean"), 0.0)
        blocks.append(float(np.sum([np.exp(-c * D).sum() for c in coefs])))
    return math.fsum(blocks) / (X.shape[0] * Y.shape[0])


def mmd2(X: np.ndarray, Y: np.ndarray, spec: KernelSpec) -> float:
    """
    Biased MMD^2 between plain sample arrays, without building a graph.

    Same statistic as `mmd2_biased` over `rbf_gram` blocks, evaluated in row
    blocks so that evaluation-sized samples fit in memory.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    if X.shape[1] != Y.shape[1]:
        raise ShapeError("mmd2", X.shape, Y.shape)
    return _gram_mean(X, X, spec) - 2.0 * _gram_mean(X, Y, spec) + _gram_mean(Y, Y, spec)
