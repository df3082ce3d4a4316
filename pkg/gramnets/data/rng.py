"""
Named random streams.

All randomness comes from numpy's Philox4x64 counter-based generator. A
stream is keyed by (seed, purpose), so data, noise, initialization and
evaluation draws are independent of each other and identical on every
platform for a given seed.
"""
import hashlib
import json
from enum import IntEnum
from typing import Union

import numpy as np


class Stream(IntEnum):
    DATA = 1
    NOISE = 2
    INIT = 3
    EVAL = 4
    REFERENCE = 5
    INIT_CRITIC = 6
    HELD_OUT = 7


SeedLike = Union[int, np.random.Generator]


def make_rng(seed: int, stream: Stream = Stream.DATA) -> np.random.Generator:
    """Philox generator with key (stream << 64) | seed."""
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    return np.random.Generator(np.random.Philox(key=(int(stream) << 64) | int(seed)))


def as_generator(seed: SeedLike, stream: Stream = Stream.DATA) -> np.random.Generator:
    """Integers become a fresh stream; generators are used as they are."""
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(int(seed), stream)


def rng_digest(rng: np.random.Generator) -> str:
    """Short stable digest of a generator's position in its stream."""
    state = rng.bit_generator.state
    blob = json.dumps(state, sort_keys=True, default=lambda o: np.asarray(o).tolist())
    return hashlib.sha256(blob.encode()).hexdigest()[:16]
