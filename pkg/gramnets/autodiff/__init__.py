from gramnets.autodiff.tensor import (
    OpRecord,
    ParamCollection,
    ParamTensor,
    TensorNode,
    as_node,
    backward,
    constant,
    gradients,
)
from gramnets.autodiff.gradcheck import check_gradients, directional_check

__all__ = [
    "OpRecord",
    "ParamCollection",
    "ParamTensor",
    "TensorNode",
    "as_node",
    "backward",
    "check_gradients",
    "constant",
    "directional_check",
    "gradients",
]
