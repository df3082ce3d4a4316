from datetime import datetime, timezone
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from gramnets.models.train import TrainConfig

INIT_SCHEME = "kaiming-uniform hidden, xavier-uniform output, zero biases"


class RunStatus(str, Enum):
    COMPLETED = "completed"
    DIVERGED = "diverged"


class RunManifest(BaseModel):
    """Reproducibility record written next to every run's artifacts."""
    run_id: str = Field(..., description="Name of the run directory under the output root.")
    config: TrainConfig = Field(..., description="The resolved configuration the run used.")
    seed: int
    method: str
    output_dir: str
    code_version: str
    init_scheme: str = Field(default=INIT_SCHEME)
    started_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    finished_at: Optional[datetime] = None
    status: RunStatus = Field(default=RunStatus.COMPLETED)
    failure: Optional[str] = Field(None, description="One-line reason when the run did not complete.")
    wall_clock_seconds: Optional[float] = None
    artifacts: List[str] = Field(default_factory=list, description="Paths relative to output_dir.")


class RunSummary(BaseModel):
    """Response model for listing runs."""
    run_id: str
    method: str
    status: RunStatus
    started_at: datetime

    @classmethod
    def from_manifest(cls, manifest: RunManifest) -> "RunSummary":
        return cls(run_id=manifest.run_id, method=manifest.method, status=manifest.status, started_at=manifest.started_at)


class TraceRow(BaseModel):
    iteration: int
    generator_mmd2: Optional[float] = None
    pd_estimate: Optional[float] = None
    critic_loss: Optional[float] = None
    gan_d_loss: Optional[float] = None
    gan_g_loss: Optional[float] = None
