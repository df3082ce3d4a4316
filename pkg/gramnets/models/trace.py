"""
Per-iteration training records and sample snapshots.

The critic column holds the Pearson-divergence estimate mean((r - 1)^2),
not the full ratio-matching objective: the latter differs from it by a
constant that cannot be estimated from samples.
"""
import csv
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field

TRACE_COLUMNS = (
    "iteration",
    "generator_mmd2",
    "pd_estimate",
    "critic_loss",
    "gan_d_loss",
    "gan_g_loss",
    "rng_digest",
)


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else format(value, ".17g")


def _parse(cell: str) -> Optional[float]:
    return None if cell == "" else float(cell)


class TraceRecord(BaseModel):
    """One training iteration. Fields a method does not produce stay None."""
    iteration: int = Field(..., ge=0)
    generator_mmd2: Optional[float] = Field(None, description="Generator loss: MMD^2 in projected space (GRAM) or data space (MMD-net).")
    pd_estimate: Optional[float] = Field(None, description="Pearson-divergence estimate from the ratio vector (GRAM only).")
    critic_loss: Optional[float] = Field(None, description="Critic objective including the positivity term (GRAM only).")
    gan_d_loss: Optional[float] = Field(None, description="Discriminator loss -[log D(x) + log(1 - D(G(z)))] (GAN only).")
    gan_g_loss: Optional[float] = Field(None, description="Non-saturating generator loss -log D(G(z)) (GAN only).")
    rng_digest: str = Field(default="", description="Digest of the noise stream position after this iteration.")
    wall_clock: float = Field(default=0.0, description="Seconds since the run started; kept out of trace.csv.")

    def row(self) -> List[str]:
        return [
            str(self.iteration),
            _fmt(self.generator_mmd2),
            _fmt(self.pd_estimate),
            _fmt(self.critic_loss),
            _fmt(self.gan_d_loss),
            _fmt(self.gan_g_loss),
            self.rng_digest,
        ]


@dataclass
class Snapshot:
    """Data and generated batches at one iteration, with their critic projections when there is a critic."""
    iteration: int
    data: np.ndarray
    generated: np.ndarray
    data_projected: Optional[np.ndarray] = None
    generated_projected: Optional[np.ndarray] = None

    @property
    def has_projection(self) -> bool:
        return self.data_projected is not None


@dataclass
class TrainTrace:
    method: str
    records: List[TraceRecord]
    snapshots: List[Snapshot]

    def __len__(self) -> int:
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([np.nan if getattr(r, name) is None else getattr(r, name) for r in self.records])

    def last(self) -> Optional[TraceRecord]:
        return self.records[-1] if self.records else None

    def snapshot_at(self, iteration: int) -> Optional[Snapshot]:
        return next((s for s in self.snapshots if s.iteration == iteration), None)


def write_trace_csv(trace: TrainTrace, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for record in trace.records:
            writer.writerow(record.row())
    return path


def read_trace_csv(path: Path, method: str = "") -> TrainTrace:
    with Path(path).open(newline="") as f:
        reader = csv.DictReader(f)
        records = [
            TraceRecord(
                iteration=int(row["iteration"]),
                generator_mmd2=_parse(row["generator_mmd2"]),
                pd_estimate=_parse(row["pd_estimate"]),
                critic_loss=_parse(row["critic_loss"]),
                gan_d_loss=_parse(row["gan_d_loss"]),
                gan_g_loss=_parse(row["gan_g_loss"]),
                rng_digest=row["rng_digest"],
            )
            for row in reader
        ]
    return TrainTrace(method=method, records=records, snapshots=[])
