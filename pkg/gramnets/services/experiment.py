"""
Single-run orchestration: train, evaluate and write every artifact.
"""
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

import numpy as np

from gramnets.core.config import settings
from gramnets.core.config_file import write_config
from gramnets.core.errors import NonFiniteLossError
from gramnets.crud import crud_run
from gramnets.data.export import write_samples_csv
from gramnets.data.noise import noise_sample
from gramnets.data.rng import Stream, make_rng
from gramnets.domain.metrics import frechet_distance, gaussian_fit, held_out_mmd, mode_coverage, nearest_samples
from gramnets.models.reports import MetricReport, SnapshotMetric
from gramnets.models.run import RunManifest, RunStatus
from gramnets.models.trace import TrainTrace, write_trace_csv
from gramnets.models.train import DatasetKind, TrainConfig
from gramnets.nn.mlp import mlp_apply, save_params
from gramnets.train import TRAINERS, Trainer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2

NEAREST_DUMP = 100


@dataclass
class RunOutcome:
    run_dir: Path
    manifest: RunManifest
    report: MetricReport

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.manifest.status is RunStatus.COMPLETED else EXIT_DIVERGED


def _finite(*arrays: np.ndarray) -> bool:
    return all(np.all(np.isfinite(a)) for a in arrays)


def evaluate(trainer: Trainer, trace: TrainTrace, run_id: str, status: RunStatus) -> MetricReport:
    """
    Held-out metrics on fresh draws from a stream the training loop never
    touches, plus per-snapshot Fréchet distance and MMD^2.
    """
    config = trainer.config
    rng = make_rng(config.seed, Stream.HELD_OUT)
    n = config.train.eval_samples
    data = trainer.dataset.sample(n, rng)
    generated = mlp_apply(trainer.generator, noise_sample(config.noise, n, rng))
    last = trace.last()
    report = MetricReport(
        run_id=run_id,
        method=config.method.value,
        status=status.value,
        iterations=len(trace),
        final_generator_mmd2=last.generator_mmd2 if last else None,
        final_pd_estimate=last.pd_estimate if last else None,
    )
    if not _finite(generated):
        logger.error(f"Run {run_id}: generator output is not finite, skipping held-out metrics")
        return report

    report.held_out_mmd2 = held_out_mmd(data, generated, config.kernel)
    report.frechet_distance = frechet_distance(gaussian_fit(data), gaussian_fit(generated))
    if config.train.dataset is not DatasetKind.MNIST:
        report.modes = mode_coverage(generated, config.ring, config.eval.min_frac, config.eval.capture_std)
    for snap in trace.snapshots:
        if not _finite(snap.data, snap.generated):
            continue
        report.snapshots.append(SnapshotMetric(
            iteration=snap.iteration,
            frechet_distance=frechet_distance(gaussian_fit(snap.data), gaussian_fit(snap.generated)),
            held_out_mmd2=held_out_mmd(snap.data, snap.generated, config.kernel),
        ))
    return report


def _write_nearest(run_dir: Path, trainer: Trainer) -> Optional[Path]:
    config = trainer.config
    rng = make_rng(config.seed, Stream.HELD_OUT)
    generated = mlp_apply(trainer.generator, noise_sample(config.noise, NEAREST_DUMP, rng))
    if not _finite(generated):
        return None
    training = trainer.dataset.data
    if training is None:
        training = trainer.dataset.sample(config.train.eval_samples, make_rng(config.seed, Stream.DATA))
    index, distance = nearest_samples(generated, training)
    table = np.column_stack([np.arange(NEAREST_DUMP), index, distance])
    return write_samples_csv(run_dir / "nearest_samples.csv", table, ["generated_index", "nearest_index", "distance"])


def run_experiment(config: TrainConfig, out_root: Optional[Path] = None, run_id: Optional[str] = None) -> RunOutcome:
    """
    Train one configuration and write its artifacts. A diverged run still
    writes the partial trace, its metrics and a manifest with status
    'diverged'.
    """
    run_dir = crud_run.create_run_dir(out_root, run_id, prefix=config.method.value)
    run_id = run_dir.name
    manifest = RunManifest(
        run_id=run_id,
        config=config,
        seed=config.seed,
        method=config.method.value,
        output_dir=str(run_dir),
        code_version=settings.CODE_VERSION,
    )
    trainer = TRAINERS[config.method](config)
    try:
        trace = trainer.run().trace
    except NonFiniteLossError as exc:
        logger.error(f"Run {run_id} diverged: {exc}")
        trace = exc.trace or trainer.trace()
        manifest.status = RunStatus.DIVERGED
        manifest.failure = str(exc)

    artifacts: List[Path] = [
        write_config(config, run_dir / "config.toml"),
        write_trace_csv(trace, run_dir / crud_run.TRACE_FILE),
        *crud_run.write_snapshots(run_dir, trace.snapshots),
        save_params(trainer.generator, run_dir / crud_run.PARAMS_DIR / "generator.txt"),
    ]
    critic = trainer.critic if trainer.critic is not None else getattr(trainer, "discriminator", None)
    if critic is not None:
        name = "critic" if trainer.critic is not None else "discriminator"
        artifacts.append(save_params(critic, run_dir / crud_run.PARAMS_DIR / f"{name}.txt"))

    report = evaluate(trainer, trace, run_id, manifest.status)
    artifacts.append(crud_run.write_metrics(run_dir, report))
    nearest = _write_nearest(run_dir, trainer)
    if nearest is not None:
        artifacts.append(nearest)

    last = trace.last()
    manifest.wall_clock_seconds = last.wall_clock if last else 0.0
    manifest.finished_at = datetime.now(timezone.utc)
    manifest.artifacts = sorted(str(p.relative_to(run_dir)) for p in artifacts) + [crud_run.MANIFEST_FILE]
    crud_run.write_manifest(run_dir, manifest)
    logger.info(f"Run {run_id} {manifest.status.value}; artifacts in {run_dir}")
    return RunOutcome(run_dir=run_dir, manifest=manifest, report=report)
