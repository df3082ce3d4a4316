from gramnets.data.datasets import DatasetHandle
from gramnets.data.mnist import mnist_load
from gramnets.data.noise import noise_sample
from gramnets.data.rings import ring2d_sample, ring3d_sample
from gramnets.data.rng import Stream, make_rng

__all__ = [
    "DatasetHandle",
    "Stream",
    "make_rng",
    "mnist_load",
    "noise_sample",
    "ring2d_sample",
    "ring3d_sample",
]
