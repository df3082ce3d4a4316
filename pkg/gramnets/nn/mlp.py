"""
Fully connected networks for the generator and the critic.

Layer l computes act(X @ W{l} + b{l}); hidden layers use the spec's hidden
activation and the last layer its output activation. Parameters are
named W0, b0, W1, b1, ... in layer order.
"""
import json
import logging
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from gramnets.autodiff import ops
from gramnets.autodiff.tensor import ParamCollection, ParamTensor, TensorNode, as_node
from gramnets.core.errors import ShapeError
from gramnets.data.rng import SeedLike, Stream, as_generator
from gramnets.models.specs import Activation, MlpSpec

logger = logging.getLogger(__name__)

CHECKPOINT_HEADER = "gramnets-params v1"

_ACTIVATIONS = {
    Activation.IDENTITY: lambda x: x,
    Activation.RELU: ops.relu,
    Activation.TANH: ops.tanh,
    Activation.SIGMOID: ops.sigmoid,
}


class ModelParams(ParamCollection):
    """Weights and biases of one network, together with the spec that shapes them."""

    def __init__(self, spec: MlpSpec, params=()):
        super().__init__(params)
        self.spec = spec

    @property
    def n_layers(self) -> int:
        return len(self.spec.layer_sizes) - 1

    def weight(self, layer: int) -> ParamTensor:
        return self[f"W{layer}"]

    def bias(self, layer: int) -> Optional[ParamTensor]:
        name = f"b{layer}"
        return self[name] if name in self else None

    def copy(self) -> "ModelParams":
        return ModelParams(self.spec, [ParamTensor.create(p.name, p.values.copy(), p.trainable) for p in self])


def mlp_init(spec: MlpSpec, seed: SeedLike, stream: Stream = Stream.INIT) -> ModelParams:
    """
    Kaiming-uniform weights (bound sqrt(6 / fan_in)) on layers followed by the
    hidden activation, Xavier-uniform (bound sqrt(6 / (fan_in + fan_out))) on
    the output layer, zero biases.
    """
    rng = as_generator(seed, stream)
    sizes = spec.layer_sizes
    params = ModelParams(spec)
    last = len(sizes) - 2
    for layer, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        if layer == last:
            bound = np.sqrt(6.0 / (fan_in + fan_out))
        else:
            bound = np.sqrt(6.0 / fan_in)
        params.add(ParamTensor.create(f"W{layer}", rng.uniform(-bound, bound, size=(fan_in, fan_out))))
        if layer != last or spec.output_bias:
            params.add(ParamTensor.create(f"b{layer}", np.zeros(fan_out)))
    return params


def mlp_forward(params: ModelParams, X, return_logits: bool = False) -> TensorNode:
    """
    Batch forward pass, rows in and rows out.

    With `return_logits` the output activation is skipped, which lets callers
    use numerically stable fused losses such as log_sigmoid.
    """
    X = as_node(X)
    spec = params.spec
    if X.values.ndim != 2 or X.shape[1] != spec.input_dim:
        raise ShapeError("mlp_forward", X.shape, (-1, spec.input_dim))
    hidden = _ACTIVATIONS[spec.hidden_activation]
    h = X
    for layer in range(params.n_layers):
        h = ops.matmul(h, params.weight(layer).node)
        bias = params.bias(layer)
        if bias is not None:
            h = ops.add(h, bias.node)
        if layer < params.n_layers - 1:
            h = hidden(h)
    if return_logits:
        return h
    return _ACTIVATIONS[spec.output_activation](h)


def mlp_apply(params: ModelParams, X: np.ndarray) -> np.ndarray:
    """Forward pass on plain arrays, no graph kept."""
    return mlp_forward(params, np.asarray(X, dtype=np.float64)).values


def save_params(params: ModelParams, path: Path) -> Path:
    """
    Text checkpoint:

        gramnets-params v1
        spec <json>
        param <name> <ndim> <dims...>
        <row-major values>
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [CHECKPOINT_HEADER, "spec " + params.spec.model_dump_json()]
    for p in params:
        lines.append(" ".join(["param", p.name, str(p.values.ndim), *map(str, p.values.shape)]))
        lines.append(" ".join(f"{v:.17g}" for v in p.values.ravel()))
    path.write_text("\n".join(lines) + "\n")
    logger.info(f"Wrote {params.count()} parameters to {path}")
    return path


def load_params(path: Path) -> ModelParams:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CHECKPOINT_HEADER:
        raise ValueError(f"{path}: not a '{CHECKPOINT_HEADER}' checkpoint")
    spec = MlpSpec.model_validate(json.loads(lines[1].removeprefix("spec ")))
    values: Dict[str, np.ndarray] = {}
    for header, body in zip(lines[2::2], lines[3::2]):
        _, name, ndim, *dims = header.split()
        shape = tuple(int(d) for d in dims[:int(ndim)])
        flat = np.array([float(v) for v in body.split()], dtype=np.float64)
        values[name] = flat.reshape(shape)
    params = mlp_init(spec, 0)
    if set(values) != set(params.names()):
        raise ValueError(f"{path}: parameters {sorted(values)} do not match spec {sorted(params.names())}")
    params.load(values)
    return params
