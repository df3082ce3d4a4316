import numpy as np
import pytest

from gramnets.autodiff import ops
from gramnets.autodiff.tensor import ParamCollection, ParamTensor, gradients
from gramnets.core.errors import NonFiniteError
from gramnets.models.specs import OptimizerConfig, OptimizerKind
from gramnets.nn.optim import Adam, Direction, RMSprop, SGD, make_optimizer, optimizer_step


def _params(values):
    return ParamCollection([ParamTensor.create("w", np.asarray(values, dtype=np.float64))])


def test_make_optimizer_kinds():
    assert isinstance(make_optimizer(OptimizerConfig()), Adam)
    assert isinstance(make_optimizer(OptimizerConfig(kind=OptimizerKind.RMSPROP)), RMSprop)
    assert isinstance(make_optimizer(OptimizerConfig(kind=OptimizerKind.SGD)), SGD)


def test_adam_first_step_is_learning_rate_times_sign():
    cfg = OptimizerConfig(learning_rate=0.01)
    params = _params([1.0, -2.0, 0.5])
    grad = np.array([3.0, -0.2, 1e-3])
    optimizer_step(None, params, {"w": grad}, cfg, Direction.DESCEND)
    np.testing.assert_allclose(params["w"].values, [1.0 - 0.01, -2.0 + 0.01, 0.5 - 0.01], rtol=1e-6)


def test_ascend_moves_against_descend():
    cfg = OptimizerConfig(learning_rate=0.01)
    up, down = _params([0.0]), _params([0.0])
    optimizer_step(None, up, {"w": np.array([1.0])}, cfg, Direction.ASCEND)
    optimizer_step(None, down, {"w": np.array([1.0])}, cfg, Direction.DESCEND)
    assert up["w"].values[0] > 0 > down["w"].values[0]


def test_zero_gradient_leaves_parameters_and_decays_moments():
    cfg = OptimizerConfig()
    params = _params([1.0, 2.0])
    fresh = optimizer_step(None, params, {"w": np.zeros(2)}, cfg)
    np.testing.assert_array_equal(params["w"].values, [1.0, 2.0])

    fresh.step(params, {"w": np.array([1.0, 1.0])}, Direction.DESCEND)
    m_before = fresh.state["w"]["m"].copy()
    moved = params["w"].values.copy()
    fresh.step(params, {"w": np.zeros(2)}, Direction.DESCEND)
    np.testing.assert_allclose(fresh.state["w"]["m"], cfg.beta1 * m_before)
    assert fresh.step_count == 3
    assert not np.array_equal(params["w"].values, moved)


def test_adam_minimizes_quadratic():
    cfg = OptimizerConfig(learning_rate=0.1)
    params = _params([0.6, 0.8])
    state = None
    for _ in range(200):
        loss = ops.sum(ops.square(params["w"].node))
        state = optimizer_step(state, params, gradients(loss, params), cfg)
    assert np.linalg.norm(params["w"].values) < 1e-3
    assert state.step_count == 200


def test_identical_runs_have_identical_trajectories():
    def run():
        cfg = OptimizerConfig(learning_rate=0.05)
        params = _params([0.3, -1.2, 2.0])
        state, path = None, []
        for t in range(50):
            loss = ops.sum(ops.exp(ops.mul(params["w"].node, np.sin(t) + 0.5)))
            state = optimizer_step(state, params, gradients(loss, params), cfg)
            path.append(params["w"].values.copy())
        return np.array(path)

    np.testing.assert_array_equal(run(), run())


def test_sgd_ascend_then_descend_restores_parameters():
    cfg = OptimizerConfig(kind=OptimizerKind.SGD, learning_rate=0.1)
    params = _params([0.25, -0.75])
    grad = {"w": np.array([0.3, 0.9])}
    state = optimizer_step(None, params, grad, cfg, Direction.ASCEND)
    optimizer_step(state, params, grad, cfg, Direction.DESCEND)
    np.testing.assert_allclose(params["w"].values, [0.25, -0.75], atol=1e-12)


def test_rmsprop_first_step():
    cfg = OptimizerConfig(kind=OptimizerKind.RMSPROP, learning_rate=1e-3, beta2=0.9)
    params = _params([0.0])
    optimizer_step(None, params, {"w": np.array([2.0])}, cfg)
    assert params["w"].values[0] == pytest.approx(-1e-3 * 2.0 / np.sqrt(0.1 * 4.0), rel=1e-6)


def test_non_finite_gradient_names_parameter():
    params = _params([1.0, 2.0])
    with pytest.raises(NonFiniteError) as info:
        optimizer_step(None, params, {"w": np.array([np.nan, 0.0])}, OptimizerConfig())
    assert info.value.name == "w"
    assert "'w'" in str(info.value)
    np.testing.assert_array_equal(params["w"].values, [1.0, 2.0])


def test_gradient_validation():
    params = _params([1.0, 2.0])
    with pytest.raises(KeyError):
        optimizer_step(None, params, {}, OptimizerConfig())
    with pytest.raises(ValueError):
        optimizer_step(None, params, {"w": np.zeros(3)}, OptimizerConfig())
    state = optimizer_step(None, params, {"w": np.zeros(2)}, OptimizerConfig())
    with pytest.raises(ValueError):
        optimizer_step(state, params, {"w": np.zeros(2)}, OptimizerConfig(learning_rate=0.5))
