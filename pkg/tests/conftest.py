import numpy as np
import pytest

from gramnets.core.config_file import apply_overrides, validate_config


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_config():
    """Factory for fast configurations: tiny networks, small batches, few iterations."""
    def make(**overrides):
        raw = {
            "train": {"epochs": 3, "batch_n": 16, "batch_m": 16, "eval_samples": 64, "snapshot_every": 2},
            "generator": {"hidden": [8, 8]},
            "critic": {"hidden": [8, 8]},
        }
        return validate_config(apply_overrides(raw, overrides))
    return make


SMALL_TOML = """\
[train]
epochs = 3
batch_n = 16
batch_m = 16
eval_samples = 64
snapshot_every = 2

[generator]
hidden = [8, 8]

[critic]
hidden = [8, 8]
"""


@pytest.fixture
def small_config_file(tmp_path):
    """The small configuration as a TOML file, with optional extra text appended."""
    def make(extra: str = "", name: str = "small.toml"):
        path = tmp_path / name
        path.write_text(SMALL_TOML + extra)
        return path
    return make
