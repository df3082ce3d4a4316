"""
First-order optimizers with explicit ascend/descend direction.

The critic climbs its objective and the generator descends its loss, both
through the same update rules; only the sign of the applied step differs.
"""
import logging
from abc import ABC, abstractmethod
from enum import Enum
from typing import Dict, Optional

import numpy as np

from gramnets.autodiff.tensor import ParamCollection
from gramnets.core.errors import NonFiniteError
from gramnets.models.specs import OptimizerConfig, OptimizerKind

logger = logging.getLogger(__name__)


class Direction(str, Enum):
    ASCEND = "ascend"
    DESCEND = "descend"


class Optimizer(ABC):
    """Per-parameter state keyed by parameter name plus a global step counter."""

    def __init__(self, cfg: OptimizerConfig):
        self.cfg = cfg
        self.step_count = 0
        self.state: Dict[str, Dict[str, np.ndarray]] = {}

    @abstractmethod
    def _delta(self, name: str, grad: np.ndarray) -> np.ndarray:
        """Step along the gradient direction for one parameter, before the sign is applied."""
        raise NotImplementedError

    def _slot(self, name: str, key: str, like: np.ndarray) -> np.ndarray:
        return self.state.setdefault(name, {}).setdefault(key, np.zeros_like(like))

    def step(self, params: ParamCollection, grads: Dict[str, np.ndarray], direction: Direction) -> None:
        trainable = params.trainable()
        for p in trainable:
            g = grads.get(p.name)
            if g is None:
                raise KeyError(f"no gradient for parameter '{p.name}'")
            if g.shape != p.values.shape:
                raise ValueError(f"gradient for '{p.name}' has shape {g.shape}, expected {p.values.shape}")
            if not np.all(np.isfinite(g)):
                raise NonFiniteError(f"non-finite gradient for parameter '{p.name}'", name=p.name)
        self.step_count += 1
        sign = 1.0 if Direction(direction) is Direction.ASCEND else -1.0
        for p in trainable:
            p.node.values = p.values + sign * self._delta(p.name, grads[p.name])


class Adam(Optimizer):
    def _delta(self, name: str, grad: np.ndarray) -> np.ndarray:
        cfg, t = self.cfg, self.step_count
        m = self._slot(name, "m", grad)
        v = self._slot(name, "v", grad)
        m *= cfg.beta1
        m += (1.0 - cfg.beta1) * grad
        v *= cfg.beta2
        v += (1.0 - cfg.beta2) * grad * grad
        m_hat = m / (1.0 - cfg.beta1 ** t)
        v_hat = v / (1.0 - cfg.beta2 ** t)
        return cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)


class RMSprop(Optimizer):
    def _delta(self, name: str, grad: np.ndarray) -> np.ndarray:
        cfg = self.cfg
        v = self._slot(name, "v", grad)
        v *= cfg.beta2
        v += (1.0 - cfg.beta2) * grad * grad
        return cfg.learning_rate * grad / (np.sqrt(v) + cfg.epsilon)


class SGD(Optimizer):
    def _delta(self, name: str, grad: np.ndarray) -> np.ndarray:
        return self.cfg.learning_rate * grad


_OPTIMIZERS = {
    OptimizerKind.ADAM: Adam,
    OptimizerKind.RMSPROP: RMSprop,
    OptimizerKind.SGD: SGD,
}


def make_optimizer(cfg: OptimizerConfig) -> Optimizer:
    return _OPTIMIZERS[cfg.kind](cfg)


def optimizer_step(
    state: Optional[Optimizer],
    params: ParamCollection,
    grads: Dict[str, np.ndarray],
    cfg: OptimizerConfig,
    direction: Direction = Direction.DESCEND,
) -> Optimizer:
    """
    Apply one update in place and return the (possibly fresh) optimizer state.

    Raises:
        NonFiniteError: a gradient entry is NaN or infinite; names the parameter.
    """
    if state is None:
        state = make_optimizer(cfg)
    elif state.cfg != cfg:
        raise ValueError("optimizer state was created for a different configuration")
    state.step(params, grads, direction)
    return state
