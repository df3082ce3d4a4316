"""
Finite-difference verification of reverse-mode gradients.
"""
import logging
from typing import Callable, Iterable, Union

import numpy as np

from gramnets.autodiff.tensor import ParamCollection, ParamTensor, TensorNode, gradients
from gramnets.core.errors import NonFiniteError

logger = logging.getLogger(__name__)

LossBuilder = Callable[[], TensorNode]


def _probe(loss_builder: LossBuilder, where: str) -> float:
    value = loss_builder().item()
    if not np.isfinite(value):
        raise NonFiniteError(f"non-finite loss while probing {where}", name=where)
    return value


def check_gradients(
    loss_builder: LossBuilder,
    params: Union[ParamCollection, Iterable[ParamTensor]],
    step: float = 1e-5,
) -> float:
    """
    Compare autodiff gradients of a scalar loss with central differences.

    `loss_builder` must rebuild the graph from the current parameter values on
    each call. Every entry of every trainable parameter is perturbed in turn
    and restored afterwards.

    Returns:
        max over entries of |autodiff - central| / (|central| + 1e-8).
    """
    if not isinstance(params, ParamCollection):
        params = ParamCollection(params)
    root = loss_builder()
    if not np.isfinite(root.item()):
        raise NonFiniteError("non-finite loss at the unperturbed point")
    analytic = gradients(root, params)

    worst = 0.0
    for param in params.trainable():
        base = param.values.copy()
        for idx in np.ndindex(base.shape):
            probe = base.copy()
            probe[idx] = base[idx] + step
            param.node.values = probe
            up = _probe(loss_builder, f"{param.name}{list(idx)}")
            probe[idx] = base[idx] - step
            param.node.values = probe
            down = _probe(loss_builder, f"{param.name}{list(idx)}")
            central = (up - down) / (2.0 * step)
            err = abs(analytic[param.name][idx] - central) / (abs(central) + 1e-8)
            worst = max(worst, err)
        param.node.values = base
    logger.debug(f"gradient check: max relative error {worst:.3e}")
    return worst


def directional_check(
    loss_builder: LossBuilder,
    params: Union[ParamCollection, Iterable[ParamTensor]],
    directions: dict,
    step: float = 1e-5,
) -> tuple[float, float]:
    """
    Return (<grad, d>, central-difference change along d) for one joint direction.

    Used to verify adjoint identities such as the one for the linear solve,
    where every input moves at once.
    """
    if not isinstance(params, ParamCollection):
        params = ParamCollection(params)
    analytic = gradients(loss_builder(), params)
    predicted = float(sum(np.sum(analytic[name] * d) for name, d in directions.items()))

    base = {name: params[name].values.copy() for name in directions}
    for name, d in directions.items():
        params[name].node.values = base[name] + step * d
    up = _probe(loss_builder, "direction+")
    for name, d in directions.items():
        params[name].node.values = base[name] - step * d
    down = _probe(loss_builder, "direction-")
    for name in directions:
        params[name].node.values = base[name]
    return predicted, (up - down) / (2.0 * step)
