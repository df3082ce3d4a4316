"""
Experiment configuration files.

A config file is TOML restricted to tables of scalars and lists. It is read
into a plain dict, optionally patched with command-line or grid overrides,
and validated into `TrainConfig`. Validation and syntax problems surface as
`ConfigError` carrying the line number or the dotted key path.
"""
import logging
import re

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from copy import deepcopy
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import tomli_w
from pydantic import ValidationError

from gramnets.core.errors import ConfigError
from gramnets.models.train import GridSpec, TrainConfig

logger = logging.getLogger(__name__)

_LINE_RE = re.compile(r"line (\d+)")

# Grid axes and CLI flags address these keys of the raw config.
OVERRIDE_KEYS = {
    "method": ("train", "method"),
    "seed": ("train", "seed"),
    "projected_dim": ("train", "projected_dim"),
    "noise_dim": ("noise", "dim"),
}
GRID_TABLE = "grid"


def load_raw(path: Path) -> Dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = _LINE_RE.search(str(exc))
        line = int(match.group(1)) if match else None
        raise ConfigError(f"{path}: {exc}", line=line) from exc


def set_key(raw: Dict[str, Any], dotted: Tuple[str, ...], value: Any) -> None:
    node = raw
    for part in dotted[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"'{part}' is not a table", key=".".join(dotted))
    node[dotted[-1]] = value


def apply_overrides(raw: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """
    Copy of `raw` with overrides applied. Keys are either grid axis names
    (method, seed, projected_dim, noise_dim, critic_hidden, generator_hidden)
    or dotted paths such as "train.epochs". Hidden-size axes set every hidden
    layer of the network to the given width, keeping the layer count.
    """
    out = deepcopy(dict(raw))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        value = getattr(value, "value", value)
        if key in OVERRIDE_KEYS:
            set_key(out, OVERRIDE_KEYS[key], value)
        elif key in ("critic_hidden", "generator_hidden"):
            net = key.split("_")[0]
            depth = len(out.get(net, {}).get("hidden", [100, 100]))
            set_key(out, (net, "hidden"), [int(value)] * depth)
        elif "." in key:
            set_key(out, tuple(key.split(".")), value)
        else:
            raise ConfigError(f"unknown override '{key}'", key=key)
    return out


def validate_config(raw: Mapping[str, Any], source: str = "config") -> TrainConfig:
    try:
        return TrainConfig.model_validate(dict(raw))
    except ValidationError as exc:
        first = exc.errors()[0]
        key = ".".join(str(p) for p in first["loc"])
        raise ConfigError(f"{source}: invalid value for '{key}': {first['msg']}", key=key) from exc


def parse_config(path: Path, overrides: Optional[Mapping[str, Any]] = None) -> TrainConfig:
    """
    Read, patch and validate a config file. Missing keys take the method
    defaults; unknown keys are errors. A [grid] table is ignored here.
    """
    raw = load_raw(path)
    raw.pop(GRID_TABLE, None)
    config = validate_config(apply_overrides(raw, overrides), source=str(path))
    logger.info(f"Loaded {config.method.value} config from {path}")
    return config


def parse_grid(path: Path) -> Tuple[Dict[str, Any], GridSpec]:
    """Split a config file into its base table set and the [grid] axes."""
    raw = load_raw(path)
    axes = raw.pop(GRID_TABLE, {})
    try:
        grid = GridSpec.model_validate(axes)
    except ValidationError as exc:
        first = exc.errors()[0]
        key = ".".join([GRID_TABLE, *(str(p) for p in first["loc"])])
        raise ConfigError(f"{path}: invalid value for '{key}': {first['msg']}", key=key) from exc
    return raw, grid


def config_to_dict(config: TrainConfig) -> Dict[str, Any]:
    return config.model_dump(mode="json", by_alias=True, exclude_none=True)


def serialize_config(config: TrainConfig) -> str:
    return tomli_w.dumps(config_to_dict(config))


def write_config(config: TrainConfig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_config(config), encoding="utf-8")
    return path
