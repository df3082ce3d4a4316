import numpy as np
import pytest

from gramnets.core.errors import NotPSDError, ShapeError
from gramnets.data.rings import ring2d_sample, ring3d_sample
from gramnets.domain.kernels import mmd2
from gramnets.domain.metrics import (
    frechet_distance,
    gaussian_fit,
    held_out_mmd,
    mode_coverage,
    nearest_samples,
)
from gramnets.models.reports import GaussianFit
from gramnets.models.specs import KernelSpec, RingSpec

RING = RingSpec()
RING3D = RingSpec(rotation_deg_axis2=60.0)


def _fit(mean, cov):
    return GaussianFit(mean=np.atleast_1d(np.asarray(mean, dtype=float)), cov=np.atleast_2d(np.asarray(cov, dtype=float)), n=10)


def test_exact_centers_capture_every_mode():
    samples = np.repeat(RING.centers(), 100, axis=0)
    report = mode_coverage(samples, RING)
    assert report.modes_captured == 8
    assert report.high_quality_fraction == 1.0
    assert report.counts == [100] * 8
    assert report.mean_spread == pytest.approx(0.0, abs=1e-12)


def test_collapsed_samples_capture_one_mode():
    samples = np.tile(RING.centers()[3], (500, 1))
    report = mode_coverage(samples, RING)
    assert report.modes_captured == 1
    assert sum(report.counts) <= report.n_samples


def test_uniform_circle_high_quality_fraction():
    """Arc within 3 std of a center: 8 * (6 * 0.01) / (2 pi) of the circle."""
    angles = np.random.default_rng(5).uniform(0.0, 2.0 * np.pi, 10_000)
    samples = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    report = mode_coverage(samples, RING)
    assert report.high_quality_fraction == pytest.approx(8 * 0.06 / (2 * np.pi), abs=0.01)


def test_ring_samples_capture_all_modes_in_2d_and_3d():
    assert mode_coverage(ring2d_sample(RING, 2000, 0), RING).modes_captured == 8
    assert mode_coverage(ring3d_sample(RING3D, 2000, 0), RING3D).modes_captured == 8


def test_mode_coverage_edge_cases(rng):
    empty = mode_coverage(np.empty((0, 2)), RING)
    assert empty.modes_captured == 0 and empty.n_samples == 0
    with pytest.raises(ShapeError):
        mode_coverage(np.zeros((4, 5)), RING)
    samples = ring2d_sample(RING, 500, 1)
    shuffled = samples[rng.permutation(500)]
    a, b = mode_coverage(shuffled, RING), mode_coverage(samples, RING)
    assert a.counts == b.counts
    assert a.high_quality_fraction == b.high_quality_fraction
    assert a.mean_spread == pytest.approx(b.mean_spread, rel=1e-12)


def test_gaussian_fit_closed_forms():
    repeated = gaussian_fit(np.tile([1.0, -2.0], (5, 1)))
    np.testing.assert_array_equal(repeated.cov, np.zeros((2, 2)))
    a, b = np.array([1.0, 2.0]), np.array([3.0, -1.0])
    pair = gaussian_fit(np.stack([a, b]))
    d = a - b
    np.testing.assert_allclose(pair.cov, np.outer(d, d) / 2.0)
    np.testing.assert_allclose(pair.mean, (a + b) / 2.0)
    single = gaussian_fit(np.array([[4.0, 5.0]]))
    assert single.n == 1 and not single.cov.any()


def test_gaussian_fit_standard_normal():
    fit = gaussian_fit(np.random.default_rng(9).standard_normal((1_000_000, 2)))
    assert np.linalg.norm(fit.mean) < 0.01
    assert np.abs(fit.cov - np.eye(2)).max() < 0.02
    np.testing.assert_array_equal(fit.cov, fit.cov.T)


def test_frechet_identical_fits_is_zero(rng):
    A = rng.standard_normal((3, 3))
    fit = _fit(rng.standard_normal(3), A @ A.T + 0.1 * np.eye(3))
    assert frechet_distance(fit, fit) == pytest.approx(0.0, abs=1e-9)


def test_frechet_mean_shift_with_equal_covariance(rng):
    A = rng.standard_normal((3, 3))
    cov = A @ A.T + 0.1 * np.eye(3)
    d = np.array([0.5, -1.0, 2.0])
    assert frechet_distance(_fit(np.zeros(3), cov), _fit(d, cov)) == pytest.approx(d @ d, abs=1e-9)


def test_frechet_one_dimensional_closed_form():
    value = frechet_distance(_fit([1.0], [[4.0]]), _fit([-0.5], [[0.25]]))
    assert value == pytest.approx(1.5 ** 2 + (2.0 - 0.5) ** 2, abs=1e-9)


def test_frechet_is_symmetric(rng):
    A, B = rng.standard_normal((4, 4)), rng.standard_normal((4, 4))
    a = _fit(rng.standard_normal(4), A @ A.T)
    b = _fit(rng.standard_normal(4), B @ B.T + np.eye(4))
    assert frechet_distance(a, b) == pytest.approx(frechet_distance(b, a), abs=1e-9)


def test_frechet_errors():
    with pytest.raises(ShapeError):
        frechet_distance(_fit([0.0], [[1.0]]), _fit([0.0, 0.0], np.eye(2)))
    with pytest.raises(NotPSDError):
        frechet_distance(_fit([0.0, 0.0], [[1.0, 0.0], [0.0, -1.0]]), _fit([0.0, 0.0], np.eye(2)))


def test_held_out_mmd(rng):
    spec = KernelSpec()
    X = rng.standard_normal((300, 2))
    assert held_out_mmd(X, X, spec) == pytest.approx(0.0, abs=1e-12)
    far = held_out_mmd(X, rng.standard_normal((300, 2)) + 50.0, spec)
    assert 0.0 < far <= 2.0 * spec.n_bandwidths
    Y = rng.standard_normal((200, 2)) + 0.5
    assert held_out_mmd(X, Y, spec) == mmd2(X, Y, spec)


def test_nearest_samples(rng):
    training = rng.standard_normal((600, 2))
    picks = np.array([3, 599, 0, 256])
    index, distance = nearest_samples(training[picks] + 1e-9, training)
    np.testing.assert_array_equal(index, picks)
    assert np.all(distance < 1e-8)
    with pytest.raises(ShapeError):
        nearest_samples(np.zeros((2, 3)), training)
