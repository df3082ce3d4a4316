from gramnets.nn.mlp import ModelParams, load_params, mlp_apply, mlp_forward, mlp_init, save_params
from gramnets.nn.optim import Direction, Optimizer, make_optimizer, optimizer_step

__all__ = [
    "Direction",
    "ModelParams",
    "Optimizer",
    "load_params",
    "make_optimizer",
    "mlp_apply",
    "mlp_forward",
    "mlp_init",
    "optimizer_step",
    "save_params",
]
