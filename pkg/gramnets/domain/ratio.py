"""
MMD-based density-ratio estimation and the critic objective.

The ratio r = p/q is evaluated only at the generated points: with Gram
matrices over projected samples, r_hat = (M/N) (K_qq + ridge I)^-1 K_qp 1,
the closed-form minimizer of the discretized kernel-mean matching problem.
The critic maximizes the Pearson divergence estimate mean((r_hat - 1)^2)
plus a positivity term.
"""
import logging
from dataclasses import dataclass

import numpy as np

from gramnets.autodiff import ops
from gramnets.autodiff.tensor import TensorNode, as_node
from gramnets.core.errors import ShapeError
from gramnets.models.specs import CriticLossConfig, PositivityMode

logger = logging.getLogger(__name__)


@dataclass
class RatioEstimate:
    """Ratio vector over the M generated samples and how it was produced."""
    r_hat: TensorNode
    ridge: float
    scale_corrected: bool

    @property
    def m(self) -> int:
        return self.r_hat.shape[0]

    def values(self) -> np.ndarray:
        return self.r_hat.values


def estimate_ratio(K_qq, K_qp, ridge: float = 1e-6) -> RatioEstimate:
    """
    r_hat = (M/N) * solve(K_qq + ridge * I, K_qp 1), differentiable in both Gram matrices.

    Raises:
        ShapeError: K_qq not square or K_qp rows differ from M.
        SingularMatrixError: the regularized system cannot be solved.
    """
    K_qq, K_qp = as_node(K_qq), as_node(K_qp)
    if K_qq.values.ndim != 2 or K_qq.shape[0] != K_qq.shape[1] \
            or K_qp.values.ndim != 2 or K_qp.shape[0] != K_qq.shape[0]:
        raise ShapeError("estimate_ratio", K_qq.shape, K_qp.shape)
    if ridge < 0:
        raise ValueError(f"ridge must be nonnegative, got {ridge}")
    m, n = K_qp.shape
    system = ops.add_diagonal(K_qq, ridge) if ridge > 0 else K_qq
    rhs = ops.sum(K_qp, axis=1)
    r_hat = ops.solve(system, rhs)
    scale_corrected = m != n
    if scale_corrected:
        r_hat = ops.affine(r_hat, m / n)
    return RatioEstimate(r_hat=r_hat, ridge=ridge, scale_corrected=scale_corrected)


def pearson_divergence_estimate(r: RatioEstimate) -> TensorNode:
    """(1/M) sum_i (r_i - 1)^2."""
    return ops.mean(ops.square(ops.affine(r.r_hat, 1.0, -1.0)))


def critic_loss(r: RatioEstimate, cfg: CriticLossConfig) -> TensorNode:
    """
    Critic objective, to be maximized.

    penalty mode: mean((r - 1)^2) + lambda * sum(r)
    clip mode:    mean((max(r, 0) - 1)^2), no lambda term
    """
    if cfg.positivity_mode is PositivityMode.CLIP:
        clipped = RatioEstimate(ops.clip_min(r.r_hat, 0.0), r.ridge, r.scale_corrected)
        return pearson_divergence_estimate(clipped)
    pd = pearson_divergence_estimate(r)
    if cfg.lambda_ == 0.0:
        return pd
    return ops.add(pd, ops.affine(ops.sum(r.r_hat), cfg.lambda_))
