from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field


@dataclass(frozen=True)
class GaussianFit:
    """Mean and unbiased covariance of a sample set."""
    mean: np.ndarray
    cov: np.ndarray
    n: int

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


class ModeReport(BaseModel):
    """Ring-mixture coverage of a generated sample set."""
    counts: List[int] = Field(..., description="Samples within the capture radius of each center, by mode.")
    modes_captured: int = Field(..., ge=0)
    high_quality_fraction: float = Field(..., ge=0.0, le=1.0, description="Fraction of samples within the capture radius of any center.")
    mean_spread: float = Field(..., ge=0.0, description="Mean distance of samples to their nearest center.")
    n_samples: int = Field(..., ge=0)
    min_frac: float
    capture_radius: float


class SnapshotMetric(BaseModel):
    iteration: int
    frechet_distance: float
    held_out_mmd2: float


class MetricReport(BaseModel):
    """Everything metrics.json records for one run."""
    run_id: str
    method: str
    status: str
    iterations: int
    final_generator_mmd2: Optional[float] = None
    final_pd_estimate: Optional[float] = None
    held_out_mmd2: Optional[float] = None
    frechet_distance: Optional[float] = None
    modes: Optional[ModeReport] = None
    snapshots: List[SnapshotMetric] = Field(default_factory=list)
