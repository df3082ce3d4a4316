from enum import Enum
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class StrictModel(BaseModel):
    """Base for every configuration schema: unknown keys are errors, instances are immutable."""
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)


class Activation(str, Enum):
    IDENTITY = "identity"
    RELU = "relu"
    TANH = "tanh"
    SIGMOID = "sigmoid"


class OptimizerKind(str, Enum):
    ADAM = "adam"
    RMSPROP = "rmsprop"
    SGD = "sgd"


class NoiseFamily(str, Enum):
    STANDARD_GAUSSIAN = "standard_gaussian"
    UNIFORM_PM1 = "uniform_pm1"


class PositivityMode(str, Enum):
    PENALTY = "penalty"
    CLIP = "clip"


class KernelSpec(StrictModel):
    """RBF mixture k(x, y) = sum_b exp(-||x - y||^2 / (2 sigma_b^2))."""
    bandwidths: List[float] = Field(default_factory=lambda: [1.0], min_length=1,
                                    description="Bandwidths sigma_1..sigma_B; the kernel is their sum, so k(x, x) = B.")

    @field_validator("bandwidths")
    @classmethod
    def _positive(cls, v: List[float]) -> List[float]:
        if any(not np.isfinite(s) or s <= 0 for s in v):
            raise ValueError("all bandwidths must be finite and strictly positive")
        return v

    @property
    def n_bandwidths(self) -> int:
        return len(self.bandwidths)


class CriticLossConfig(StrictModel):
    """Positivity handling and regularization of the critic objective."""
    lambda_: float = Field(default=1.0, ge=0.0, alias="lambda",
                           description="Weight of the positivity term lambda * r^T 1.")
    positivity_mode: PositivityMode = Field(default=PositivityMode.PENALTY,
                                            description="'penalty' adds lambda * r^T 1; 'clip' uses max(r, 0) instead.")
    ridge: float = Field(default=1e-6, ge=0.0, description="Ridge added to the diagonal of K_qq before solving.")


class MlpSpec(StrictModel):
    """Fully connected network: ReLU between hidden layers, configurable output activation."""
    layer_sizes: List[int] = Field(..., min_length=2, description="Input dimension first, output dimension last.")
    hidden_activation: Activation = Field(default=Activation.RELU)
    output_activation: Activation = Field(default=Activation.IDENTITY)
    output_bias: bool = Field(default=True, description="Whether the last layer carries a bias vector.")

    @field_validator("layer_sizes")
    @classmethod
    def _positive_sizes(cls, v: List[int]) -> List[int]:
        if any(n <= 0 for n in v):
            raise ValueError("layer sizes must be positive")
        return v

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_dim(self) -> int:
        return self.layer_sizes[-1]

    def parameter_count(self) -> int:
        sizes = self.layer_sizes
        count = sum(a * b + b for a, b in zip(sizes[:-1], sizes[1:]))
        return count if self.output_bias else count - sizes[-1]


class OptimizerConfig(StrictModel):
    """ADAM / RMSprop / plain SGD hyper-parameters."""
    kind: OptimizerKind = Field(default=OptimizerKind.ADAM)
    learning_rate: float = Field(default=1e-3, gt=0.0)
    beta1: float = Field(default=0.5, ge=0.0, lt=1.0, description="ADAM first-moment decay ('momentum decay').")
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0,
                         description="ADAM second-moment decay; RMSprop squared-gradient decay.")
    epsilon: float = Field(default=1e-8, gt=0.0)


class NoiseSpec(StrictModel):
    """Generator input distribution p_z."""
    dim: int = Field(default=2, ge=1, description="Noise dimension h.")
    family: NoiseFamily = Field(default=NoiseFamily.STANDARD_GAUSSIAN)


class RingSpec(StrictModel):
    """Mixture of isotropic Gaussians on a circle, optionally lifted to 3D and rotated."""
    n_modes: int = Field(default=8, ge=1)
    mode_std: float = Field(default=0.01, gt=0.0)
    radius: float = Field(default=1.0, gt=0.0)
    rotation_deg_axis2: float = Field(default=0.0, description="Rotation about the second axis (3D variant: 60).")
    third_dim_std: float = Field(default=0.1, gt=0.0, description="Std of the appended third coordinate (3D variant).")

    def centers(self) -> np.ndarray:
        angles = 2.0 * np.pi * np.arange(self.n_modes) / self.n_modes
        return self.radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)


class GaussianSpec(StrictModel):
    """A multivariate normal N(mean, cov), used by the ratio consistency checks."""
    mean: List[float] = Field(..., min_length=1)
    cov: List[List[float]]

    @model_validator(mode="after")
    def _square(self) -> "GaussianSpec":
        d = len(self.mean)
        if len(self.cov) != d or any(len(row) != d for row in self.cov):
            raise ValueError(f"cov must be {d}x{d}")
        return self

    @classmethod
    def isotropic(cls, mean, var: float = 1.0) -> "GaussianSpec":
        mean = [float(m) for m in np.atleast_1d(mean)]
        return cls(mean=mean, cov=(var * np.eye(len(mean))).tolist())

    @property
    def dim(self) -> int:
        return len(self.mean)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        # Symmetric root instead of Cholesky so rank-deficient pushforwards still sample.
        w, v = np.linalg.eigh(np.asarray(self.cov))
        root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
        return np.asarray(self.mean) + rng.standard_normal((n, self.dim)) @ root

    def pushforward_linear(self, weight: np.ndarray, bias: np.ndarray) -> "GaussianSpec":
        """Distribution of x @ weight + bias for x ~ self."""
        mean = np.asarray(self.mean) @ weight + bias
        cov = weight.T @ np.asarray(self.cov) @ weight
        return GaussianSpec(mean=mean.tolist(), cov=cov.tolist())
