"""
CSV export of sample arrays with lossless float formatting.
"""
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

FLOAT_FORMAT = "%.17g"


def write_samples_csv(path: Path, samples: np.ndarray, columns: Optional[Sequence[str]] = None) -> Path:
    samples = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    columns = list(columns) if columns else [f"x{i}" for i in range(samples.shape[1])]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, samples, delimiter=",", fmt=FLOAT_FORMAT, header=",".join(columns), comments="")
    return path


def read_samples_csv(path: Path) -> np.ndarray:
    return np.loadtxt(Path(path), delimiter=",", skiprows=1, dtype=np.float64, ndmin=2)
