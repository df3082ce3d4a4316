import numpy as np

from gramnets.data.rng import SeedLike, Stream, as_generator
from gramnets.models.specs import NoiseFamily, NoiseSpec


def noise_sample(spec: NoiseSpec, n: int, seed: SeedLike) -> np.ndarray:
    """n x h draws from the generator's input distribution."""
    rng = as_generator(seed, Stream.NOISE)
    if spec.family is NoiseFamily.UNIFORM_PM1:
        return rng.uniform(-1.0, 1.0, size=(n, spec.dim))
    return rng.standard_normal((n, spec.dim))
