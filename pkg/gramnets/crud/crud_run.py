"""
Filesystem store for run artifacts.

A run lives in one directory under the output root:

    <root>/<run_id>/manifest.json
                    metrics.json
                    trace.csv
                    snapshots/iter_<t>_{data,generated}[_projected].csv
                    nearest_samples.csv
                    params/{generator,critic,discriminator}.txt
                    plots/*.svg
"""
import json
import logging
from pathlib import Path
from typing import List, Optional

from gramnets.core.config import settings
from gramnets.core.errors import RunNotFoundError
from gramnets.core.json_encoder import dumps
from gramnets.core.utils import generate_unique_run_id
from gramnets.data.export import write_samples_csv
from gramnets.models.reports import MetricReport
from gramnets.models.run import RunManifest, TraceRow
from gramnets.models.trace import Snapshot, read_trace_csv

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"
METRICS_FILE = "metrics.json"
TRACE_FILE = "trace.csv"
SNAPSHOT_DIR = "snapshots"
PLOT_DIR = "plots"
PARAMS_DIR = "params"


def output_root(root: Optional[Path] = None) -> Path:
    return Path(root) if root is not None else settings.OUTPUT_ROOT


def get_run_dir(run_id: str, root: Optional[Path] = None) -> Path:
    """
    Resolves a run id to its directory.

    Raises:
        RunNotFoundError: the id is not a plain name or has no manifest.
    """
    if not run_id or "/" in run_id or "\\" in run_id or run_id in (".", ".."):
        raise RunNotFoundError(f"invalid run id '{run_id}'")
    path = output_root(root) / run_id
    if not (path / MANIFEST_FILE).is_file():
        raise RunNotFoundError(f"no run '{run_id}' under {output_root(root)}")
    return path


def create_run_dir(root: Optional[Path] = None, run_id: Optional[str] = None, prefix: str = "run") -> Path:
    root = output_root(root)
    root.mkdir(parents=True, exist_ok=True)
    run_id = run_id or generate_unique_run_id(root, prefix=prefix)
    path = root / run_id
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_json(path: Path, payload) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload) + "\n")
    return path


def write_manifest(run_dir: Path, manifest: RunManifest) -> Path:
    return write_json(Path(run_dir) / MANIFEST_FILE, manifest.model_dump(mode="json", by_alias=True))


def write_metrics(run_dir: Path, report: MetricReport) -> Path:
    return write_json(Path(run_dir) / METRICS_FILE, report.model_dump(mode="json"))


def write_snapshots(run_dir: Path, snapshots: List[Snapshot]) -> List[Path]:
    """One CSV per batch and space, tagged by iteration."""
    written = []
    for snap in snapshots:
        tag = f"iter_{snap.iteration:06d}"
        batches = {"data": snap.data, "generated": snap.generated}
        if snap.has_projection:
            batches["data_projected"] = snap.data_projected
            batches["generated_projected"] = snap.generated_projected
        for kind, array in batches.items():
            written.append(write_samples_csv(Path(run_dir) / SNAPSHOT_DIR / f"{tag}_{kind}.csv", array))
    return written


def read_manifest(run_id: str, root: Optional[Path] = None) -> RunManifest:
    path = get_run_dir(run_id, root) / MANIFEST_FILE
    return RunManifest.model_validate(json.loads(path.read_text()))


def read_metrics(run_id: str, root: Optional[Path] = None) -> MetricReport:
    path = get_run_dir(run_id, root) / METRICS_FILE
    if not path.is_file():
        raise RunNotFoundError(f"run '{run_id}' has no metrics")
    return MetricReport.model_validate(json.loads(path.read_text()))


def read_trace_rows(run_id: str, root: Optional[Path] = None, skip: int = 0, limit: int = 1000) -> List[TraceRow]:
    path = get_run_dir(run_id, root) / TRACE_FILE
    if not path.is_file():
        raise RunNotFoundError(f"run '{run_id}' has no trace")
    records = read_trace_csv(path).records[skip:skip + limit]
    return [TraceRow.model_validate(r.model_dump(exclude={"rng_digest", "wall_clock"})) for r in records]


def list_runs(root: Optional[Path] = None, skip: int = 0, limit: int = 100) -> List[RunManifest]:
    """Manifests of every run directly under the root, oldest first."""
    root = output_root(root)
    if not root.is_dir():
        return []
    manifests = []
    for manifest_path in sorted(root.glob(f"*/{MANIFEST_FILE}")):
        try:
            manifests.append(RunManifest.model_validate(json.loads(manifest_path.read_text())))
        except (ValueError, OSError):
            logger.error(f"Skipping unreadable manifest {manifest_path}", exc_info=True)
    manifests.sort(key=lambda m: (m.started_at, m.run_id))
    return manifests[skip:skip + limit]


def list_plots(run_id: str, root: Optional[Path] = None) -> List[str]:
    plot_dir = get_run_dir(run_id, root) / PLOT_DIR
    return sorted(p.name for p in plot_dir.glob("*.svg")) if plot_dir.is_dir() else []


def read_plot(run_id: str, name: str, root: Optional[Path] = None) -> str:
    if name not in list_plots(run_id, root):
        raise RunNotFoundError(f"run '{run_id}' has no plot '{name}'")
    return (get_run_dir(run_id, root) / PLOT_DIR / name).read_text()
