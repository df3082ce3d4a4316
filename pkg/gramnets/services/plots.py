import logging
import re
from pathlib import Path
from typing import List

import numpy as np

from gramnets.crud.crud_run import PLOT_DIR, SNAPSHOT_DIR, TRACE_FILE
from gramnets.data.export import read_samples_csv
from gramnets.models.trace import read_trace_csv
from gramnets.plotting.svg import scatter_svg, trace_svg

logger = logging.getLogger(__name__)

_SNAPSHOT_RE = re.compile(r"iter_(\d+)_data\.csv$")
TRACE_SERIES = ("generator_mmd2", "pd_estimate", "gan_d_loss", "gan_g_loss")


def render_run_plots(run_dir: Path) -> List[Path]:
    """
    Write plots/trace.svg and one scatter per snapshot and space into the run
    directory, from the CSV artifacts alone.

    Raises:
        ValueError: the run has an empty trace.
    """
    run_dir = Path(run_dir)
    trace = read_trace_csv(run_dir / TRACE_FILE)
    if not trace.records:
        raise ValueError(f"{run_dir}: empty trace")
    plot_dir = run_dir / PLOT_DIR
    plot_dir.mkdir(parents=True, exist_ok=True)

    iterations = np.array([r.iteration for r in trace.records], dtype=np.float64)
    columns = {}
    for name in TRACE_SERIES:
        values = trace.column(name)
        if np.isfinite(values).any():
            columns[name] = values
    written = [plot_dir / "trace.svg"]
    written[0].write_text(trace_svg(iterations, columns, split_at=100, title="loss"))

    snapshot_dir = run_dir / SNAPSHOT_DIR
    for data_csv in sorted(snapshot_dir.glob("iter_*_data.csv")):
        iteration = int(_SNAPSHOT_RE.search(data_csv.name).group(1))
        tag = f"iter_{iteration:06d}"
        for space, suffix in (("original", ""), ("projected", "_projected")):
            data_path = snapshot_dir / f"{tag}_data{suffix}.csv"
            gen_path = snapshot_dir / f"{tag}_generated{suffix}.csv"
            if not (data_path.is_file() and gen_path.is_file()):
                continue
            svg = scatter_svg(read_samples_csv(data_path), read_samples_csv(gen_path),
                              title=f"{space} space, iteration {iteration}")
            out = plot_dir / f"{tag}_{space}.svg"
            out.write_text(svg)
            written.append(out)
    logger.info(f"Wrote {len(written)} plots to {plot_dir}")
    return written
