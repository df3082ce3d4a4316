"""
Command-line entry point: `python -m gramnets train | grid | plot | serve`.

Exit codes: 0 success, 1 configuration or usage error, 2 the training run
diverged (a recorded outcome, with partial artifacts written).
"""
import logging
from pathlib import Path
from typing import Optional

import click

from gramnets.core.config import settings
from gramnets.core.config_file import apply_overrides, parse_config, parse_grid, validate_config
from gramnets.core.errors import GramError
from gramnets.core.logging import configure_logging
from gramnets.models.train import Method
from gramnets.services.experiment import EXIT_CONFIG, EXIT_OK, run_experiment
from gramnets.services.grid import run_grid
from gramnets.services.plots import render_run_plots

logger = logging.getLogger(__name__)

METHOD_CHOICE = click.Choice([m.value for m in Method])


def _fail(message: str, code: int = EXIT_CONFIG) -> None:
    click.echo(f"error: {message}", err=True)
    raise SystemExit(code)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log per-iteration losses.")
def cli(verbose: bool) -> None:
    """Generative ratio matching experiments."""
    configure_logging("DEBUG" if verbose else None)


@cli.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="TOML config; defaults apply to every missing key.")
@click.option("--seed", type=int, default=None, help="Override train.seed.")
@click.option("--out", "out_root", type=click.Path(path_type=Path), default=None,
              help="Output root (default: GRAM_OUTPUT_ROOT or ./runs).")
@click.option("--method", type=METHOD_CHOICE, default=None, help="Override train.method.")
@click.option("--run-id", default=None, help="Run directory name (default: generated).")
def train(config_path: Optional[Path], seed: Optional[int], out_root: Optional[Path],
          method: Optional[str], run_id: Optional[str]) -> None:
    """Train one configuration and write its artifacts."""
    overrides = {"seed": seed, "method": method}
    try:
        if config_path is None:
            config = validate_config(apply_overrides({}, overrides), source="defaults")
        else:
            config = parse_config(config_path, overrides)
        outcome = run_experiment(config, out_root or settings.OUTPUT_ROOT, run_id)
    except GramError as exc:
        _fail(str(exc))
    if outcome.exit_code != EXIT_OK:
        _fail(f"run diverged: {outcome.manifest.failure} (partial artifacts in {outcome.run_dir})", outcome.exit_code)
    click.echo(str(outcome.run_dir))


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path), required=True,
              help="Base config; may carry the sweep axes in a [grid] table.")
@click.option("--grid", "grid_path", type=click.Path(exists=True, path_type=Path), default=None,
              help="File whose [grid] table overrides the one in --config.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None,
              help="Grid directory (default: <output root>/grid).")
@click.option("--parallel", type=int, default=None, help="Concurrent cells (default: GRAM_GRID_PARALLEL).")
def grid(config_path: Path, grid_path: Optional[Path], out_dir: Optional[Path], parallel: Optional[int]) -> None:
    """Run every cell of a configuration grid and write summary.csv."""
    try:
        base_raw, grid_spec = parse_grid(config_path)
        if grid_path is not None:
            _, grid_spec = parse_grid(grid_path)
        summary = run_grid(base_raw, grid_spec, out_dir or settings.OUTPUT_ROOT / "grid",
                           parallel or settings.GRID_PARALLEL)
    except GramError as exc:
        _fail(str(exc))
    click.echo(str(summary))


@cli.command()
@click.argument("run_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
def plot(run_dir: Path) -> None:
    """Render SVG scatter and trace plots for a finished run."""
    try:
        written = render_run_plots(run_dir)
    except (GramError, ValueError, OSError) as exc:
        _fail(str(exc))
    for path in written:
        click.echo(str(path))


@cli.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@click.option("--root", type=click.Path(path_type=Path), default=None, help="Output root to serve.")
def serve(host: str, port: int, root: Optional[Path]) -> None:
    """Serve run artifacts read-only over HTTP."""
    import uvicorn

    from gramnets.main import app

    if root is not None:
        settings.OUTPUT_ROOT = root
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    cli()
