import numpy as np

from gramnets.domain.lotus import LinearProjection, kernel_ratio_function, lotus_consistency_check
from gramnets.models.specs import GaussianSpec, KernelSpec


def test_identity_critic_on_equal_distributions():
    spec = GaussianSpec.isotropic([0.0, 0.0])
    n = 10_000
    assert lotus_consistency_check(spec, spec, LinearProjection.identity(2), n) < 2.0 / np.sqrt(n)


def test_constant_critic_gives_identical_expectations():
    p = GaussianSpec.isotropic([1.0, 0.0])
    q = GaussianSpec.isotropic([0.0, 0.0])
    assert lotus_consistency_check(p, q, LinearProjection.constant(2, [0.7]), 1000) == 0.0


def test_linear_critic_discrepancy_shrinks_with_samples():
    p = GaussianSpec(mean=[0.5, -0.25], cov=[[1.0, 0.3], [0.3, 0.8]])
    q = GaussianSpec.isotropic([0.0, 0.0])
    critic = LinearProjection(np.array([[1.0, 0.2], [-0.4, 0.9]]), np.array([0.1, 0.0]))
    small = [lotus_consistency_check(p, q, critic, 10_000, seed=s) for s in range(8)]
    large = [lotus_consistency_check(p, q, critic, 100_000, seed=s) for s in range(8)]
    assert np.mean(large) < np.mean(small)


def test_nonlinear_critic_without_pushforward():
    spec = GaussianSpec.isotropic([0.0])
    discrepancy = lotus_consistency_check(spec, spec, np.tanh, 5000, n_reference=100)
    assert np.isfinite(discrepancy)
    assert discrepancy < 2.0 / np.sqrt(5000)


def test_pushforward_of_linear_projection():
    spec = GaussianSpec(mean=[1.0, 2.0], cov=[[2.0, 0.5], [0.5, 1.0]])
    projection = LinearProjection(np.array([[1.0], [-1.0]]), np.array([0.5]))
    pushed = projection.pushforward(spec)
    assert pushed.mean == [-0.5]
    assert pushed.cov == [[2.0]]


def test_kernel_ratio_function_is_one_on_equal_reference_sets(rng):
    Y = rng.standard_normal((30, 1)) * 3.0
    ratio = kernel_ratio_function(Y, Y, KernelSpec(), ridge=1e-6)
    values = ratio(np.linspace(-2.0, 2.0, 11)[:, None])
    np.testing.assert_allclose(values, np.ones(11), atol=1e-2)
