"""
Ring-of-Gaussians benchmarks in 2D and 3D.
"""
import numpy as np

from gramnets.data.rng import SeedLike, Stream, as_generator
from gramnets.models.specs import RingSpec


def rotation_axis2(degrees: float) -> np.ndarray:
    """Right-handed rotation about the second axis, acting on row vectors as x @ R.T."""
    t = np.deg2rad(degrees)
    c, s = np.cos(t), np.sin(t)
    return np.array([
        [c, 0.0, s],
        [0.0, 1.0, 0.0],
        [-s, 0.0, c],
    ])


def _ring_points(spec: RingSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    modes = rng.integers(0, spec.n_modes, size=n)
    noise = rng.standard_normal((n, 2)) * spec.mode_std
    return spec.centers()[modes] + noise


def ring2d_sample(spec: RingSpec, n: int, seed: SeedLike) -> np.ndarray:
    """Pick a mode uniformly, then add isotropic noise of std mode_std around its center."""
    return _ring_points(spec, n, as_generator(seed, Stream.DATA))


def lift_3d(points2d: np.ndarray, spec: RingSpec, rng: np.random.Generator) -> np.ndarray:
    """Append N(0, third_dim_std^2) as the third coordinate, before any rotation."""
    z = rng.standard_normal((points2d.shape[0], 1)) * spec.third_dim_std
    return np.concatenate([points2d, z], axis=1)


def ring3d_sample(spec: RingSpec, n: int, seed: SeedLike) -> np.ndarray:
    """2D ring lifted with Gaussian noise on axis 3, then rotated about axis 2."""
    rng = as_generator(seed, Stream.DATA)
    lifted = lift_3d(_ring_points(spec, n, rng), spec, rng)
    return lifted @ rotation_axis2(spec.rotation_deg_axis2).T


def ring_centers(spec: RingSpec, dim: int = 2) -> np.ndarray:
    centers = spec.centers()
    if dim == 2:
        return centers
    lifted = np.concatenate([centers, np.zeros((spec.n_modes, 1))], axis=1)
    return lifted @ rotation_axis2(spec.rotation_deg_axis2).T


def unrotate_to_plane(samples: np.ndarray, spec: RingSpec) -> np.ndarray:
    """Undo the ring3d rotation and drop the noise axis."""
    return (samples @ rotation_axis2(spec.rotation_deg_axis2))[:, :2]
