"""
Evaluation of generated samples: ring-mode coverage, held-out MMD and the
Fréchet distance between Gaussian fits (identity embedding).
"""
import logging
from typing import Tuple

import numpy as np
from scipy.linalg import eigh
from scipy.spatial.distance import cdist

from gramnets.core.errors import NotPSDError, ShapeError
from gramnets.data.rings import unrotate_to_plane
from gramnets.domain.kernels import mmd2
from gramnets.models.reports import GaussianFit, ModeReport
from gramnets.models.specs import KernelSpec, RingSpec

logger = logging.getLogger(__name__)

PSD_TOLERANCE = 1e-8
NEAREST_CHUNK = 256


def mode_coverage(
    samples: np.ndarray,
    spec: RingSpec,
    min_frac: float = 0.02,
    capture_std: float = 3.0,
) -> ModeReport:
    """
    Assign every sample to its nearest ring center. A mode is captured when at
    least `min_frac` of all samples fall within `capture_std * mode_std` of it.

    Three-dimensional samples are rotated back into the ring plane and their
    noise axis dropped first.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    if samples.shape[1] == 3:
        samples = unrotate_to_plane(samples, spec)
    elif samples.shape[1] != 2:
        raise ShapeError("mode_coverage", samples.shape, detail="ring samples must have 2 or 3 columns")
    n = samples.shape[0]
    radius = capture_std * spec.mode_std
    if n == 0:
        return ModeReport(counts=[0] * spec.n_modes, modes_captured=0, high_quality_fraction=0.0,
                          mean_spread=0.0, n_samples=0, min_frac=min_frac, capture_radius=radius)

    dist = np.sqrt(cdist(samples, spec.centers(), "sqeuclidean"))
    nearest = dist.argmin(axis=1)
    nearest_dist = dist[np.arange(n), nearest]
    close = nearest_dist <= radius
    counts = np.bincount(nearest[close], minlength=spec.n_modes)
    captured = int(np.sum(counts >= min_frac * n))
    return ModeReport(
        counts=counts.tolist(),
        modes_captured=captured,
        high_quality_fraction=float(close.sum()) / n,
        mean_spread=float(nearest_dist.mean()),
        n_samples=n,
        min_frac=min_frac,
        capture_radius=radius,
    )


def gaussian_fit(samples: np.ndarray) -> GaussianFit:
    """Sample mean and unbiased (n - 1) covariance; a single sample has zero covariance."""
    samples = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    n, d = samples.shape
    mean = samples.mean(axis=0)
    if n < 2:
        return GaussianFit(mean=mean, cov=np.zeros((d, d)), n=n)
    centered = samples - mean
    cov = centered.T @ centered / (n - 1)
    return GaussianFit(mean=mean, cov=0.5 * (cov + cov.T), n=n)


def _psd_eigh(matrix: np.ndarray, what: str) -> Tuple[np.ndarray, np.ndarray]:
    w, v = eigh(0.5 * (matrix + matrix.T))
    if w.size and w.min() < -PSD_TOLERANCE:
        raise NotPSDError(f"{what} has eigenvalue {w.min():.3e} below -{PSD_TOLERANCE:g}")
    return np.clip(w, 0.0, None), v


def _sqrtm_psd(matrix: np.ndarray, what: str) -> np.ndarray:
    w, v = _psd_eigh(matrix, what)
    return (v * np.sqrt(w)) @ v.T


def frechet_distance(a: GaussianFit, b: GaussianFit) -> float:
    """
    ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2).

    Raises:
        ShapeError: the fits have different dimensions.
        NotPSDError: a covariance (or the symmetrized product) has an
            eigenvalue below -1e-8; smaller negatives are clamped to zero.
    """
    if a.dim != b.dim:
        raise ShapeError("frechet_distance", a.mean.shape, b.mean.shape)
    root_a = _sqrtm_psd(a.cov, "first covariance")
    _psd_eigh(b.cov, "second covariance")
    w, _ = _psd_eigh(root_a @ b.cov @ root_a, "covariance product")
    diff = a.mean - b.mean
    value = float(diff @ diff + np.trace(a.cov) + np.trace(b.cov) - 2.0 * np.sqrt(w).sum())
    return max(value, 0.0)


def held_out_mmd(data_samples: np.ndarray, gen_samples: np.ndarray, kernel: KernelSpec) -> float:
    """Biased MMD^2 between fresh data and generated batches."""
    return mmd2(data_samples, gen_samples, kernel)


def nearest_samples(generated: np.ndarray, training: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """For each generated row, the index of and Euclidean distance to its nearest training row."""
    generated = np.atleast_2d(np.asarray(generated, dtype=np.float64))
    training = np.atleast_2d(np.asarray(training, dtype=np.float64))
    if generated.shape[1] != training.shape[1]:
        raise ShapeError("nearest_samples", generated.shape, training.shape)
    index = np.empty(generated.shape[0], dtype=np.int64)
    distance = np.empty(generated.shape[0])
    for lo in range(0, generated.shape[0], NEAREST_CHUNK):
        D = cdist(generated[lo:lo + NEAREST_CHUNK], training, "sqeuclidean")
        idx = D.argmin(axis=1)
        index[lo:lo + NEAREST_CHUNK] = idx
        distance[lo:lo + NEAREST_CHUNK] = np.sqrt(np.maximum(D[np.arange(D.shape[0]), idx], 0.0))
    return index, distance
