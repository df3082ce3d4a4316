from enum import Enum
from itertools import product
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

from pydantic import Field, field_validator, model_validator

from gramnets.models.specs import (
    Activation,
    CriticLossConfig,
    KernelSpec,
    MlpSpec,
    NoiseSpec,
    OptimizerConfig,
    RingSpec,
    StrictModel,
)


class Method(str, Enum):
    GRAM = "gram"
    GAN = "gan"
    MMDNET = "mmdnet"


class DatasetKind(str, Enum):
    RING2D = "ring2d"
    RING3D = "ring3d"
    MNIST = "mnist"


DATA_DIMS = {DatasetKind.RING2D: 2, DatasetKind.RING3D: 3, DatasetKind.MNIST: 784}

# Per-method optimizer defaults; an explicit section overrides only the keys it names.
METHOD_OPTIMIZERS: Dict[Method, Dict[str, Dict[str, Any]]] = {
    Method.GRAM: {
        "generator": {"kind": "adam", "learning_rate": 1e-3, "beta1": 0.5},
        "critic": {"kind": "adam", "learning_rate": 1e-3, "beta1": 0.5},
    },
    Method.GAN: {
        "generator": {"kind": "adam", "learning_rate": 1e-4, "beta1": 0.5},
        "critic": {"kind": "adam", "learning_rate": 1e-4, "beta1": 0.5},
    },
    Method.MMDNET: {
        "generator": {"kind": "rmsprop", "learning_rate": 1e-3, "beta2": 0.9},
        "critic": {"kind": "rmsprop", "learning_rate": 1e-3, "beta2": 0.9},
    },
}


class TrainSection(StrictModel):
    """The [train] table: method, data source, schedule and batch sizes."""
    method: Method = Field(default=Method.GRAM)
    dataset: DatasetKind = Field(default=DatasetKind.RING2D)
    epochs: int = Field(default=2000, ge=1, description="Iterations; one epoch is one minibatch iteration.")
    batch_n: int = Field(default=200, ge=1, description="Data batch size N.")
    batch_m: int = Field(default=200, ge=1, description="Generated batch size M.")
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    projected_dim: int = Field(default=2, ge=0, description="Critic output dimension K; 0 means K equals the noise dimension.")
    gan_feature_dim: int = Field(default=10, ge=1, description="Width of the last hidden layer of the GAN discriminator.")
    snapshot_every: int = Field(default=500, ge=1)
    eval_samples: int = Field(default=2000, ge=1, description="Fresh samples per side for held-out metrics.")
    log_every: int = Field(default=100, ge=1)


class NetworkSection(StrictModel):
    """The [generator] and [critic] tables: hidden widths and output activation."""
    hidden: List[int] = Field(default_factory=lambda: [100, 100])
    output_activation: Activation = Field(default=Activation.IDENTITY)

    @field_validator("hidden")
    @classmethod
    def _positive(cls, v: List[int]) -> List[int]:
        if any(n <= 0 for n in v):
            raise ValueError("hidden sizes must be positive")
        return v


class OptimizerSections(StrictModel):
    generator: OptimizerConfig
    critic: OptimizerConfig


class MnistSection(StrictModel):
    images_path: Optional[Path] = None
    labels_path: Optional[Path] = None


class EvalSection(StrictModel):
    """Mode-coverage thresholds."""
    capture_std: float = Field(default=3.0, gt=0.0, description="Capture radius in multiples of the ring's mode_std.")
    min_frac: float = Field(default=0.02, ge=0.0, le=1.0, description="Fraction of samples a mode needs to count as captured.")


class TrainConfig(StrictModel):
    """A fully resolved experiment configuration."""
    train: TrainSection = Field(default_factory=TrainSection)
    generator: NetworkSection = Field(default_factory=NetworkSection)
    critic: NetworkSection = Field(default_factory=NetworkSection)
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    kernel: KernelSpec = Field(default_factory=KernelSpec)
    critic_loss: CriticLossConfig = Field(default_factory=CriticLossConfig)
    optimizer: OptimizerSections
    ring: RingSpec = Field(default_factory=RingSpec)
    mnist: MnistSection = Field(default_factory=MnistSection)
    eval: EvalSection = Field(default_factory=EvalSection)

    @model_validator(mode="before")
    @classmethod
    def _method_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        train = data.get("train") or {}
        raw_method = train.get("method", Method.GRAM) if isinstance(train, dict) else getattr(train, "method", Method.GRAM)
        try:
            method = Method(raw_method)
        except (ValueError, TypeError):
            # Let field validation report the bad method with its key path.
            return data
        given = data.get("optimizer")
        if isinstance(given, OptimizerSections):
            return data
        given = dict(given or {})
        # Merged key by key: a partial table keeps the method's other defaults.
        for net, defaults in METHOD_OPTIMIZERS[method].items():
            section = given.get(net)
            if section is None:
                given[net] = dict(defaults)
            elif isinstance(section, dict):
                given[net] = {**defaults, **section}
        data["optimizer"] = given
        return data

    @model_validator(mode="after")
    def _mnist_paths(self) -> "TrainConfig":
        if self.train.dataset is DatasetKind.MNIST and (self.mnist.images_path is None or self.mnist.labels_path is None):
            raise ValueError("dataset 'mnist' needs mnist.images_path and mnist.labels_path")
        return self

    # Convenience accessors used throughout training and reporting.
    @property
    def method(self) -> Method:
        return self.train.method

    @property
    def seed(self) -> int:
        return self.train.seed

    @property
    def epochs(self) -> int:
        return self.train.epochs

    @property
    def critic_cfg(self) -> CriticLossConfig:
        return self.critic_loss

    @property
    def data_dim(self) -> int:
        return DATA_DIMS[self.train.dataset]

    @property
    def projected_dim(self) -> int:
        return self.train.projected_dim or self.noise.dim

    @property
    def generator_spec(self) -> MlpSpec:
        return MlpSpec(
            layer_sizes=[self.noise.dim, *self.generator.hidden, self.data_dim],
            output_activation=self.generator.output_activation,
        )

    @property
    def critic_spec(self) -> MlpSpec:
        # The RBF kernel only sees differences, so an output bias would be inert.
        return MlpSpec(
            layer_sizes=[self.data_dim, *self.critic.hidden, self.projected_dim],
            output_activation=self.critic.output_activation,
            output_bias=False,
        )

    @property
    def discriminator_spec(self) -> MlpSpec:
        return MlpSpec(
            layer_sizes=[self.data_dim, *self.critic.hidden, self.train.gan_feature_dim, 1],
            output_activation=Activation.SIGMOID,
        )


class GridSpec(StrictModel):
    """
    Axes of a configuration sweep. Every listed axis is crossed with every
    other; an empty axis keeps the base configuration's value.
    """
    noise_dim: List[int] = Field(default_factory=list)
    critic_hidden: List[int] = Field(default_factory=list)
    generator_hidden: List[int] = Field(default_factory=list)
    method: List[Method] = Field(default_factory=list)
    seed: List[int] = Field(default_factory=list)
    projected_dim: List[int] = Field(default_factory=list)

    def axes(self) -> Dict[str, list]:
        return {name: values for name, values in self.model_dump().items() if values}

    def n_cells(self) -> int:
        count = 1
        for values in self.axes().values():
            count *= len(values)
        return count

    def cells(self) -> Iterator[Dict[str, Any]]:
        axes = self.axes()
        names = list(axes)
        for combo in product(*(axes[n] for n in names)):
            yield dict(zip(names, combo))


GRID_AXIS_TAGS = {
    "noise_dim": "h",
    "critic_hidden": "ch",
    "generator_hidden": "gh",
    "method": "",
    "seed": "s",
    "projected_dim": "k",
}


def cell_name(cell: Dict[str, Any]) -> str:
    parts = []
    for axis, value in cell.items():
        value = value.value if isinstance(value, Enum) else value
        parts.append(f"{GRID_AXIS_TAGS[axis]}{value}")
    return "_".join(parts) or "base"
