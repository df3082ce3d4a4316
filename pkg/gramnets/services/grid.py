"""
Configuration sweeps. Each grid cell is an independent run in its own
subdirectory; cells share nothing and may run in separate processes.
"""
import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Mapping, Tuple

from gramnets.core.config_file import apply_overrides, validate_config
from gramnets.models.train import GridSpec, TrainConfig, cell_name
from gramnets.services.experiment import run_experiment

logger = logging.getLogger(__name__)

SUMMARY_FILE = "summary.csv"
RESULT_COLUMNS = ("status", "modes_captured", "held_out_mmd2", "final_generator_mmd2", "frechet_distance")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(getattr(value, "value", value))


def build_cells(base_raw: Mapping[str, Any], grid: GridSpec) -> List[Tuple[str, Dict[str, Any], TrainConfig]]:
    """Validate every cell up front so a bad axis value fails before any training starts."""
    cells = []
    for cell in grid.cells():
        name = cell_name(cell)
        config = validate_config(apply_overrides(base_raw, cell), source=f"grid cell {name}")
        cells.append((name, cell, config))
    return cells


def _run_cell(name: str, config: TrainConfig, out_dir: Path) -> Dict[str, Any]:
    outcome = run_experiment(config, out_root=out_dir, run_id=name)
    report = outcome.report
    return {
        "status": outcome.manifest.status.value,
        "modes_captured": report.modes.modes_captured if report.modes else None,
        "held_out_mmd2": report.held_out_mmd2,
        "final_generator_mmd2": report.final_generator_mmd2,
        "frechet_distance": report.frechet_distance,
    }


def run_grid(base_raw: Mapping[str, Any], grid: GridSpec, out_dir: Path, parallel: int = 1) -> Path:
    """
    Run the Cartesian product of the grid axes over the base configuration
    and write summary.csv with one row per cell.

    Diverged cells are results, not failures: they are recorded in the
    summary and the sweep carries on.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = build_cells(base_raw, grid)
    logger.info(f"Running grid of {len(cells)} cells with {parallel} worker(s) into {out_dir}")

    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            futures = [pool.submit(_run_cell, name, config, out_dir) for name, _, config in cells]
            results = [f.result() for f in futures]
    else:
        results = [_run_cell(name, config, out_dir) for name, _, config in cells]

    axes = list(grid.axes())
    summary = out_dir / SUMMARY_FILE
    with summary.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["cell", *axes, *RESULT_COLUMNS])
        for (name, cell, _), result in zip(cells, results):
            writer.writerow([name, *(_fmt(cell[a]) for a in axes), *(_fmt(result[c]) for c in RESULT_COLUMNS)])
            logger.info(f"Grid cell {name} finished: {result['status']}")

    diverged = sum(r["status"] != "completed" for r in results)
    logger.info(f"Grid done: {diverged} of {len(results)} cells diverged; summary in {summary}")
    return summary
