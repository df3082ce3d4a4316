from pathlib import Path

import pytest

from gramnets.core.config_file import apply_overrides, parse_config, parse_grid, serialize_config, write_config
from gramnets.core.errors import ConfigError
from gramnets.models.specs import OptimizerKind
from gramnets.models.train import Method, TrainConfig
from gramnets.services.grid import build_cells

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.toml"
    path.write_text("")
    config = parse_config(path)
    assert config.method is Method.GRAM
    assert config.train.epochs == 2000
    assert config.train.batch_n == 200 and config.train.batch_m == 200
    assert config.optimizer.generator.kind is OptimizerKind.ADAM
    assert config.optimizer.generator.learning_rate == 1e-3
    assert config.optimizer.critic.beta1 == 0.5
    assert config.kernel.bandwidths == [1.0]


@pytest.mark.parametrize("method, kind, lr", [
    ("gan", OptimizerKind.ADAM, 1e-4),
    ("mmdnet", OptimizerKind.RMSPROP, 1e-3),
])
def test_method_picks_optimizer_defaults(tmp_path, method, kind, lr):
    path = tmp_path / "m.toml"
    path.write_text(f'[train]\nmethod = "{method}"\n')
    config = parse_config(path)
    assert config.optimizer.generator.kind is kind
    assert config.optimizer.critic.learning_rate == lr


@pytest.mark.parametrize("method, table, kind, lr", [
    ("gram", "[optimizer.generator]\nepsilon = 1e-7\n", OptimizerKind.ADAM, 1e-3),
    ("gan", "[optimizer.critic]\nepsilon = 1e-7\n", OptimizerKind.ADAM, 1e-4),
    ("mmdnet", "[optimizer.generator]\nepsilon = 1e-7\n", OptimizerKind.RMSPROP, 1e-3),
])
def test_partial_optimizer_table_keeps_method_defaults(tmp_path, method, table, kind, lr):
    path = tmp_path / "partial.toml"
    path.write_text(f'[train]\nmethod = "{method}"\n\n{table}')
    config = parse_config(path)
    for section in (config.optimizer.generator, config.optimizer.critic):
        assert section.kind is kind
        assert section.learning_rate == lr
    net = "critic" if method == "gan" else "generator"
    assert getattr(config.optimizer, net).epsilon == 1e-7


def test_partial_learning_rate_keeps_rmsprop():
    raw = {"train": {"method": "mmdnet"}, "optimizer": {"generator": {"learning_rate": 5e-4}}}
    config = TrainConfig.model_validate(raw)
    assert config.optimizer.generator.kind is OptimizerKind.RMSPROP
    assert config.optimizer.generator.learning_rate == 5e-4
    assert config.optimizer.generator.beta2 == 0.9


@pytest.mark.parametrize("method, kind, lr", [
    ("gan", OptimizerKind.ADAM, 1e-4),
    ("mmdnet", OptimizerKind.RMSPROP, 1e-3),
])
def test_method_override_on_hyper_preset(method, kind, lr):
    config = parse_config(CONFIG_DIR / "hyper.toml", {"method": method})
    assert config.optimizer.generator.kind is kind
    assert config.optimizer.critic.learning_rate == lr


def test_negative_learning_rate_names_key(small_config_file):
    path = small_config_file("\n[optimizer.generator]\nlearning_rate = -1\n")
    with pytest.raises(ConfigError) as info:
        parse_config(path)
    assert info.value.key == "optimizer.generator.learning_rate"
    assert "optimizer.generator.learning_rate" in str(info.value)


def test_unknown_key_is_rejected(small_config_file):
    path = small_config_file("\n[eval]\ncapture_radius = 3.0\n")
    with pytest.raises(ConfigError) as info:
        parse_config(path)
    assert info.value.key == "eval.capture_radius"


def test_syntax_error_carries_line(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("[train]\nepochs = 3\nbatch_n = = 4\n")
    with pytest.raises(ConfigError) as info:
        parse_config(path)
    assert info.value.line == 3


def test_missing_file_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError, match="cannot read config"):
        parse_config(tmp_path / "nope.toml")


def test_mnist_needs_paths(tmp_path):
    path = tmp_path / "mnist.toml"
    path.write_text('[train]\ndataset = "mnist"\n')
    with pytest.raises(ConfigError, match="images_path"):
        parse_config(path)


def test_overrides_beat_the_file(small_config_file):
    config = parse_config(small_config_file(), {"seed": 9, "method": "mmdnet", "train.epochs": 5})
    assert config.seed == 9
    assert config.method is Method.MMDNET
    assert config.epochs == 5


def test_hidden_axis_keeps_depth():
    raw = apply_overrides({"critic": {"hidden": [8, 8, 8]}}, {"critic_hidden": 20})
    assert raw["critic"]["hidden"] == [20, 20, 20]


def test_unknown_override():
    with pytest.raises(ConfigError, match="unknown override"):
        apply_overrides({}, {"epochs": 3})


def test_grid_table_is_ignored_by_parse_config(small_config_file):
    config = parse_config(small_config_file("\n[grid]\nseed = [1, 2]\n"))
    assert config.seed == 0


def test_serialized_config_parses_back_equal(small_config_file, tmp_path):
    config = parse_config(small_config_file("\n[critic_loss]\nlambda = 0.5\npositivity_mode = \"clip\"\n"))
    path = write_config(config, tmp_path / "out" / "config.toml")
    again = parse_config(path)
    assert again == config
    assert serialize_config(again) == serialize_config(config)


def test_shipped_configs_parse():
    paths = sorted(CONFIG_DIR.glob("*.toml"))
    assert len(paths) == 4
    for path in paths:
        parse_grid(path)
        parse_config(path)


def test_stability_grid_cells():
    raw, grid = parse_grid(CONFIG_DIR / "stability_grid.toml")
    assert "grid" not in raw
    assert grid.n_cells() == 4 * 3 * 2
    cells = build_cells(raw, grid)
    assert len(cells) == 24
    names = [name for name, _, _ in cells]
    assert len(set(names)) == 24
    assert "h2_ch20_gram" in names
    name, cell, config = cells[-1]
    assert config.noise.dim == 16
    assert config.critic.hidden == [200, 200]
    assert config.method is Method.GAN


def test_bad_grid_axis_names_key(tmp_path):
    path = tmp_path / "grid.toml"
    path.write_text('[grid]\nmethod = ["gram", "vae"]\n')
    with pytest.raises(ConfigError) as info:
        parse_grid(path)
    assert info.value.key.startswith("grid.method")


def test_bad_cell_fails_before_training(tmp_path):
    path = tmp_path / "grid.toml"
    path.write_text("[grid]\nnoise_dim = [2, 0]\n")
    raw, grid = parse_grid(path)
    with pytest.raises(ConfigError) as info:
        build_cells(raw, grid)
    assert info.value.key == "noise.dim"
    assert "h0" in str(info.value)
