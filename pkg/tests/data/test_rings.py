import numpy as np
import pytest

from gramnets.data.rings import lift_3d, ring2d_sample, ring3d_sample, ring_centers, rotation_axis2, unrotate_to_plane
from gramnets.models.specs import RingSpec

RING = RingSpec()
RING3D = RingSpec(rotation_deg_axis2=60.0)


def test_centers_geometry():
    centers = RING.centers()
    assert centers.shape == (8, 2)
    np.testing.assert_allclose(centers[1], [np.sqrt(2) / 2, np.sqrt(2) / 2], atol=1e-15)
    np.testing.assert_allclose(np.linalg.norm(centers, axis=1), np.ones(8), atol=1e-15)


def test_tiny_std_puts_samples_on_centers():
    spec = RingSpec(mode_std=1e-12)
    samples = ring2d_sample(spec, 200, 3)
    distance = np.min(np.linalg.norm(samples[:, None, :] - spec.centers()[None], axis=2), axis=1)
    assert distance.max() < 1e-10


def test_mode_frequencies_are_uniform():
    samples = ring2d_sample(RING, 100_000, 0)
    nearest = np.argmin(np.linalg.norm(samples[:, None, :] - RING.centers()[None], axis=2), axis=1)
    freq = np.bincount(nearest, minlength=8) / len(samples)
    assert np.all((freq > 0.115) & (freq < 0.135))
    assert np.all(np.abs(samples.mean(axis=0)) < 5 * 0.71 / np.sqrt(len(samples)))


def test_same_seed_same_samples():
    np.testing.assert_array_equal(ring2d_sample(RING, 50, 8), ring2d_sample(RING, 50, 8))
    np.testing.assert_array_equal(ring3d_sample(RING3D, 50, 8), ring3d_sample(RING3D, 50, 8))
    assert not np.array_equal(ring2d_sample(RING, 50, 8), ring2d_sample(RING, 50, 9))


def test_rotation_of_unit_x():
    point = np.array([[1.0, 0.0, 0.0]]) @ rotation_axis2(60.0).T
    np.testing.assert_allclose(point, [[0.5, 0.0, -np.sqrt(3) / 2]], atol=1e-15)


def test_ring3d_is_rotated_lift_of_ring2d():
    """Same stream draws; the rotation matrix is recovered from three basis points."""
    rng_a, rng_b = np.random.default_rng(4), np.random.default_rng(4)
    lifted = lift_3d(ring2d_sample(RING3D, 300, rng_a), RING3D, rng_a)
    rotated = ring3d_sample(RING3D, 300, rng_b)
    R = np.eye(3) @ rotation_axis2(60.0).T
    np.testing.assert_allclose(rotated, lifted @ R, atol=1e-14)
    np.testing.assert_allclose(np.linalg.norm(rotated, axis=1), np.linalg.norm(lifted, axis=1), atol=1e-12)
    np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-15)


def test_third_coordinate_variance_before_rotation():
    rng = np.random.default_rng(6)
    lifted = lift_3d(ring2d_sample(RING3D, 100_000, rng), RING3D, rng)
    assert lifted[:, 2].var() == pytest.approx(0.01, rel=0.1)


def test_unrotate_recovers_plane():
    samples = ring3d_sample(RING3D, 100, 2)
    plane = unrotate_to_plane(samples, RING3D)
    np.testing.assert_allclose(np.linalg.norm(plane, axis=1), np.ones(100), atol=0.06)
    np.testing.assert_allclose(unrotate_to_plane(ring_centers(RING3D, dim=3), RING3D), RING3D.centers(), atol=1e-15)
