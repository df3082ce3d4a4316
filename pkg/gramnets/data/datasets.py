"""
Uniform sampling interface over synthetic and materialized datasets.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from gramnets.data.rng import SeedLike, Stream, as_generator

Sampler = Callable[[int, np.random.Generator], np.ndarray]


@dataclass
class DatasetHandle:
    """x ~ p_x: a seeded sample source of dimension `dim`, optionally backed by an array."""
    name: str
    dim: int
    sampler: Sampler
    data: Optional[np.ndarray] = None
    labels: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def from_array(cls, data: np.ndarray, name: str, labels: Optional[np.ndarray] = None) -> "DatasetHandle":
        def sampler(n: int, rng: np.random.Generator) -> np.ndarray:
            return data[rng.integers(0, data.shape[0], size=n)]

        return cls(name=name, dim=data.shape[1], sampler=sampler, data=data, labels=labels)

    def sample(self, n: int, seed: SeedLike) -> np.ndarray:
        out = self.sampler(n, as_generator(seed, Stream.DATA))
        if out.shape != (n, self.dim):
            raise ValueError(f"dataset '{self.name}' produced shape {out.shape}, expected {(n, self.dim)}")
        return out
