from typing import NamedTuple, Optional

import numpy as np

from gramnets.nn.mlp import ModelParams, mlp_apply


class ProjectedBatches(NamedTuple):
    data: np.ndarray
    generated: np.ndarray
    data_projected: Optional[np.ndarray]
    generated_projected: Optional[np.ndarray]


def snapshot_projection(params: Optional[ModelParams], data_batch: np.ndarray, gen_batch: np.ndarray) -> ProjectedBatches:
    """Copies of both batches in data space and, given a critic, in its projected space."""
    data_batch = np.array(data_batch, dtype=np.float64)
    gen_batch = np.array(gen_batch, dtype=np.float64)
    if params is None:
        return ProjectedBatches(data_batch, gen_batch, None, None)
    return ProjectedBatches(data_batch, gen_batch, mlp_apply(params, data_batch), mlp_apply(params, gen_batch))
