"""
Numerical check of the change-of-variables step behind the critic objective.

For a fixed projection f and squared ratio g = (p_bar / q_bar)^2 on the
projected space, E_{x~q}[g(f(x))] must equal E_{y~q_bar}[g(y)]. The left side
is estimated by pushing data-space samples through f; the right side by
sampling q_bar directly when the projection knows its pushforward
(linear, identity and constant maps), or from an independent data-space
draw otherwise. g itself comes from the Gram-matrix ratio estimator on a
reference sample shared by both sides.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Protocol

import numpy as np
from scipy.spatial.distance import cdist

from gramnets.data.rng import Stream, make_rng
from gramnets.domain.kernels import rbf_gram
from gramnets.domain.ratio import estimate_ratio
from gramnets.models.specs import GaussianSpec, KernelSpec

logger = logging.getLogger(__name__)

EVAL_CHUNK = 8192


class Projection(Protocol):
    def __call__(self, X: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class LinearProjection:
    """f(x) = x @ weight + bias; knows the pushforward of a Gaussian."""
    weight: np.ndarray
    bias: np.ndarray

    @classmethod
    def identity(cls, dim: int) -> "LinearProjection":
        return cls(np.eye(dim), np.zeros(dim))

    @classmethod
    def constant(cls, in_dim: int, value) -> "LinearProjection":
        value = np.atleast_1d(np.asarray(value, dtype=np.float64))
        return cls(np.zeros((in_dim, value.size)), value)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weight + self.bias

    def pushforward(self, spec: GaussianSpec) -> GaussianSpec:
        return spec.pushforward_linear(self.weight, self.bias)


def kernel_ratio_function(
    Y_p_ref: np.ndarray,
    Y_q_ref: np.ndarray,
    kernel: KernelSpec,
    ridge: float,
) -> Callable[[np.ndarray], np.ndarray]:
    """
    Ratio estimate at the reference q points, extended to arbitrary points by
    kernel-weighted averaging. Negative ratios are clipped at zero.
    """
    r_ref = estimate_ratio(rbf_gram(Y_q_ref, Y_q_ref, kernel),
                           rbf_gram(Y_q_ref, Y_p_ref, kernel), ridge).values()
    r_ref = np.clip(r_ref, 0.0, None)
    inv_two_var = [1.0 / (2.0 * s * s) for s in kernel.bandwidths]

    def ratio(Y: np.ndarray) -> np.ndarray:
        out = np.empty(Y.shape[0])
        for lo in range(0, Y.shape[0], EVAL_CHUNK):
            D = cdist(Y[lo:lo + EVAL_CHUNK], Y_q_ref, "sqeuclidean")
            W = sum(np.exp(-c * D) for c in inv_two_var)
            out[lo:lo + EVAL_CHUNK] = (W @ r_ref) / W.sum(axis=1)
        return out

    return ratio


def lotus_consistency_check(
    p_spec: GaussianSpec,
    q_spec: GaussianSpec,
    critic: Projection,
    n_samples: int,
    *,
    n_reference: int = 200,
    kernel: Optional[KernelSpec] = None,
    ridge: float = 1e-6,
    seed: int = 0,
) -> float:
    """
    |E_{x~q}[g(f(x))] - E_{y~q_bar}[g(y)]| with both expectations by Monte Carlo over n_samples.

    The p and q reference draws share one random stream, so identical
    specs give identical reference sets and a ratio of one everywhere.
    """
    kernel = kernel or KernelSpec()
    Y_p_ref = critic(p_spec.sample(n_reference, make_rng(seed, Stream.REFERENCE)))
    Y_q_ref = critic(q_spec.sample(n_reference, make_rng(seed, Stream.REFERENCE)))
    ratio = kernel_ratio_function(np.atleast_2d(Y_p_ref), np.atleast_2d(Y_q_ref), kernel, ridge)

    data_side = critic(q_spec.sample(n_samples, make_rng(seed, Stream.DATA)))
    lhs = float(np.mean(ratio(data_side) ** 2))

    pushforward = getattr(critic, "pushforward", None)
    rng = make_rng(seed, Stream.EVAL)
    if pushforward is not None:
        projected_side = pushforward(q_spec).sample(n_samples, rng)
    else:
        projected_side = critic(q_spec.sample(n_samples, rng))
    rhs = float(np.mean(ratio(projected_side) ** 2))

    logger.debug(f"lotus check n={n_samples}: data-space {lhs:.6g}, projected-space {rhs:.6g}")
    return abs(lhs - rhs)
