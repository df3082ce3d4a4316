import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st
from hypothesis.extra.numpy import arrays

from gramnets.autodiff.gradcheck import check_gradients
from gramnets.autodiff.tensor import ParamCollection, ParamTensor
from gramnets.autodiff import ops
from gramnets.core.errors import ShapeError
from gramnets.domain.kernels import gram_pair, mmd2, mmd2_biased, mmd2_from_pair, rbf_gram
from gramnets.models.specs import KernelSpec

UNIT = KernelSpec(bandwidths=[1.0])

samples = arrays(np.float64, st.tuples(st.integers(2, 8), st.just(2)),
                 elements=st.floats(-3.0, 3.0, allow_nan=False, width=64))


def _biased(X, Y, spec):
    return mmd2_biased(rbf_gram(X, X, spec), rbf_gram(X, Y, spec), rbf_gram(Y, Y, spec)).item()


def test_rbf_gram_self_similarity_counts_bandwidths():
    """k(x, x) is the number of bandwidths in the mixture."""
    spec = KernelSpec(bandwidths=[0.1, 1.0, 10.0, 100.0])
    assert rbf_gram([[0.3, -1.2]], [[0.3, -1.2]], spec).values.tolist() == [[4.0]]


def test_rbf_gram_exponent_convention():
    """||x - y||^2 = 2 with sigma = 1 gives exp(-1)."""
    K = rbf_gram([[0.0, 0.0]], [[1.0, 1.0]], UNIT).values
    assert K[0, 0] == pytest.approx(math.exp(-1.0), abs=1e-15)
    assert K[0, 0] == pytest.approx(0.367879, abs=1e-6)


def test_rbf_gram_requires_bandwidth():
    with pytest.raises(ValueError):
        rbf_gram([[0.0]], [[1.0]], KernelSpec.model_construct(bandwidths=[]))


def test_rbf_gram_gradient(rng):
    X = ParamTensor.create("X", rng.standard_normal((5, 2)))
    Y = rng.standard_normal((4, 2))
    W = rng.standard_normal((5, 4))
    spec = KernelSpec(bandwidths=[0.5, 2.0])
    err = check_gradients(lambda: ops.sum(ops.mul(rbf_gram(X.node, Y, spec), W)), ParamCollection([X]))
    assert err < 1e-6


def test_gram_pair_invariants(rng):
    Y_q, Y_p = rng.standard_normal((6, 2)), rng.standard_normal((4, 2))
    spec = KernelSpec(bandwidths=[1.0, 3.0])
    pair = gram_pair(Y_q, Y_p, spec)
    assert (pair.m, pair.n) == (6, 4)
    K_qq = pair.K_qq.values
    np.testing.assert_array_equal(K_qq, K_qq.T)
    np.testing.assert_array_equal(np.diag(K_qq), [2.0] * 6)
    assert np.all(pair.K_qp.values > 0) and np.all(pair.K_qp.values <= 2.0)
    assert np.linalg.eigvalsh(K_qq).min() > -1e-12
    assert gram_pair(Y_q, Y_p, spec, with_pp=False).K_pp is None


def test_mmd2_identical_sets_is_zero(rng):
    X = rng.standard_normal((20, 3))
    assert abs(_biased(X, X, UNIT)) < 1e-12
    assert abs(mmd2(X, X, UNIT)) < 1e-12


def test_mmd2_shape_errors():
    with pytest.raises(ShapeError):
        mmd2_biased(np.ones((2, 2)), np.ones((3, 2)), np.ones((2, 2)))
    with pytest.raises(ShapeError):
        mmd2(np.ones((2, 2)), np.ones((2, 3)), UNIT)


def test_mmd2_duplicates_leave_statistic_unchanged(rng):
    X, Y = rng.standard_normal((7, 2)), rng.standard_normal((5, 2)) + 1.0
    doubled = _biased(np.vstack([X, X]), np.vstack([Y, Y]), UNIT)
    assert doubled == pytest.approx(_biased(X, Y, UNIT), abs=1e-14)


def test_mmd2_from_pair_is_symmetric_in_samples(rng):
    Y_q, Y_p = rng.standard_normal((6, 2)), rng.standard_normal((9, 2)) + 0.5
    forward = mmd2_from_pair(gram_pair(Y_q, Y_p, UNIT)).item()
    assert forward == pytest.approx(_biased(Y_p, Y_q, UNIT), abs=1e-14)
    with pytest.raises(ValueError):
        mmd2_from_pair(gram_pair(Y_q, Y_p, UNIT, with_pp=False))


def test_blockwise_mmd2_matches_graph_version(rng):
    X, Y = rng.standard_normal((40, 2)), rng.standard_normal((30, 2)) + 0.3
    spec = KernelSpec(bandwidths=[0.5, 1.0, 4.0])
    assert mmd2(X, Y, spec) == pytest.approx(_biased(X, Y, spec), abs=1e-12)


def test_mmd2_decreases_towards_zero_with_bandwidth(rng):
    X, Y = rng.standard_normal((50, 2)), rng.standard_normal((50, 2)) + 2.0
    values = [_biased(X, Y, KernelSpec(bandwidths=[s])) for s in (1.0, 10.0, 100.0, 1000.0)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-4


def test_mmd2_matches_gaussian_closed_form():
    """
    N(0, 1) vs N(1, 1), sigma = 1, 5000 samples each, 10 repetitions.

    For x - y ~ N(m, s^2), E exp(-(x - y)^2 / 2) = exp(-m^2 / (2 (1 + s^2))) / sqrt(1 + s^2).
    The V-statistic keeps the diagonal (k = 1) terms, so its expectation is
    2 [1/n + (1 - 1/n) / sqrt(3)] - (2 / sqrt(3)) exp(-1/6).
    """
    n = 5000
    expected = 2.0 * (1.0 / n + (1.0 - 1.0 / n) / math.sqrt(3.0)) - 2.0 / math.sqrt(3.0) * math.exp(-1.0 / 6.0)
    values = []
    for rep in range(10):
        rng = np.random.default_rng(100 + rep)
        values.append(mmd2(rng.standard_normal((n, 1)), rng.standard_normal((n, 1)) + 1.0, UNIT))
    values = np.array(values)
    standard_error = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(values.mean() - expected) < 3.0 * standard_error
    assert expected == pytest.approx(0.17727, abs=1e-3)


@hyp_settings(max_examples=50, deadline=None)
@given(X=samples, Y=samples, seed=st.integers(0, 2 ** 32 - 1))
def test_mmd2_is_permutation_invariant_and_nonnegative(X, Y, seed):
    rng = np.random.default_rng(seed)
    value = _biased(X, Y, UNIT)
    assert value >= -1e-12
    assert _biased(X[rng.permutation(len(X))], Y[rng.permutation(len(Y))], UNIT) == value
