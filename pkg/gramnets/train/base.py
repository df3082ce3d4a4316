"""
Shared training-loop machinery.

A trainer owns its networks, optimizers and random streams. `run` performs
`epochs` iterations, records one `TraceRecord` per iteration and keeps
sample snapshots at the fixed cadence. Any non-finite loss or gradient ends
the run with `NonFiniteLossError`, which carries the partial trace.
"""
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set

import numpy as np

from gramnets.core.errors import NonFiniteError, NonFiniteLossError, SingularMatrixError
from gramnets.data.datasets import DatasetHandle
from gramnets.data.mnist import mnist_load
from gramnets.data.noise import noise_sample
from gramnets.data.rings import ring2d_sample, ring3d_sample
from gramnets.data.rng import Stream, make_rng, rng_digest
from gramnets.models.trace import Snapshot, TraceRecord, TrainTrace
from gramnets.models.train import DatasetKind, Method, TrainConfig
from gramnets.nn.mlp import ModelParams, mlp_apply, mlp_init
from gramnets.nn.optim import Optimizer, make_optimizer
from gramnets.train.snapshot import snapshot_projection

logger = logging.getLogger(__name__)

FIXED_SNAPSHOTS = (0, 10, 100, 1000)


def make_dataset(config: TrainConfig) -> DatasetHandle:
    kind = config.train.dataset
    if kind is DatasetKind.RING2D:
        return DatasetHandle("ring2d", 2, lambda n, rng: ring2d_sample(config.ring, n, rng))
    if kind is DatasetKind.RING3D:
        return DatasetHandle("ring3d", 3, lambda n, rng: ring3d_sample(config.ring, n, rng))
    return mnist_load(config.mnist.images_path, config.mnist.labels_path)


def snapshot_iterations(epochs: int, every: int) -> Set[int]:
    """{0, 10, 100, 1000, end} up to `epochs`, plus every multiple of `every`."""
    marks = {t for t in FIXED_SNAPSHOTS if t <= epochs}
    marks.update(range(every, epochs + 1, every))
    marks.add(epochs)
    return marks


@dataclass
class TrainResult:
    config: TrainConfig
    trace: TrainTrace
    generator: ModelParams
    critic: Optional[ModelParams] = None
    optimizers: Dict[str, Optimizer] = field(default_factory=dict)


class Trainer(ABC):
    """One training run of one method."""

    method: Method

    def __init__(self, config: TrainConfig, dataset: Optional[DatasetHandle] = None):
        if config.method is not self.method:
            raise ValueError(f"{type(self).__name__} cannot run method '{config.method.value}'")
        self.config = config
        self.dataset = dataset or make_dataset(config)
        if self.dataset.dim != config.data_dim:
            raise ValueError(f"dataset '{self.dataset.name}' has dimension {self.dataset.dim}, config expects {config.data_dim}")
        seed = config.seed
        self.data_rng = make_rng(seed, Stream.DATA)
        self.noise_rng = make_rng(seed, Stream.NOISE)
        eval_rng = make_rng(seed, Stream.EVAL)
        self.snapshot_data = self.dataset.sample(config.train.batch_n, eval_rng)
        self.snapshot_noise = noise_sample(config.noise, config.train.batch_m, eval_rng)

        self.generator = mlp_init(config.generator_spec, seed, Stream.INIT)
        self.generator_optimizer = make_optimizer(config.optimizer.generator)
        self.records: List[TraceRecord] = []
        self.snapshots: List[Snapshot] = []

    @property
    def critic(self) -> Optional[ModelParams]:
        """The network whose projection is snapshotted, if any."""
        return None

    @abstractmethod
    def step(self, iteration: int) -> TraceRecord:
        """One iteration: sample batches, compute losses and gradients, update every network once."""
        raise NotImplementedError

    def optimizers(self) -> Dict[str, Optimizer]:
        return {"generator": self.generator_optimizer}

    def sample_batches(self):
        """Fresh data batch (N rows) and noise batch (M rows) from the training streams."""
        X = self.dataset.sample(self.config.train.batch_n, self.data_rng)
        Z = noise_sample(self.config.noise, self.config.train.batch_m, self.noise_rng)
        return X, Z

    def check_finite(self, iteration: int, **losses: float) -> None:
        for name, value in losses.items():
            if not np.isfinite(value):
                raise NonFiniteLossError(iteration, name, trace=self.trace())

    def take_snapshot(self, iteration: int) -> Snapshot:
        generated = mlp_apply(self.generator, self.snapshot_noise)
        batches = snapshot_projection(self.critic, self.snapshot_data, generated)
        snap = Snapshot(iteration, *batches)
        self.snapshots.append(snap)
        return snap

    def trace(self) -> TrainTrace:
        return TrainTrace(method=self.method.value, records=list(self.records), snapshots=list(self.snapshots))

    def result(self) -> TrainResult:
        return TrainResult(
            config=self.config,
            trace=self.trace(),
            generator=self.generator,
            critic=self.critic,
            optimizers=self.optimizers(),
        )

    def run(self) -> TrainResult:
        cfg = self.config.train
        marks = snapshot_iterations(cfg.epochs, cfg.snapshot_every)
        logger.info(f"Starting {self.method.value} run: {cfg.epochs} iterations on {self.dataset.name}, seed {cfg.seed}")
        start = time.perf_counter()
        self.take_snapshot(0)
        for iteration in range(1, cfg.epochs + 1):
            try:
                record = self.step(iteration)
            except (NonFiniteError, SingularMatrixError) as exc:
                name = getattr(exc, "name", None) or type(exc).__name__
                raise NonFiniteLossError(iteration, name, trace=self.trace()) from exc
            record.rng_digest = rng_digest(self.noise_rng)
            record.wall_clock = time.perf_counter() - start
            self.records.append(record)
            if iteration in marks:
                self.take_snapshot(iteration)
            if iteration % cfg.log_every == 0:
                logger.debug(f"iteration {iteration}: {record.model_dump(exclude={'rng_digest', 'wall_clock'}, exclude_none=True)}")
        logger.info(f"Finished {self.method.value} run in {time.perf_counter() - start:.1f}s")
        return self.result()
