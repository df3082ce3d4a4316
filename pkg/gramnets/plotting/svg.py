"""
Plain-text SVG rendering of sample scatters and loss traces.

Output depends only on the inputs: coordinates are printed with fixed
precision and elements are emitted in input order.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

WIDTH = 480
HEIGHT = 360
MARGIN = 48
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


@dataclass(frozen=True)
class Series:
    label: str
    points: np.ndarray
    css_class: str
    color: str


def _f(x: float) -> str:
    return f"{x:.2f}"


def _header(width: int, height: int) -> List[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]


def _bounds(arrays: Sequence[np.ndarray]) -> Tuple[float, float, float, float]:
    stacked = np.concatenate([a for a in arrays if a.size], axis=0)
    lo, hi = stacked.min(axis=0), stacked.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    pad = 0.05 * span
    return float(lo[0] - pad[0]), float(hi[0] + pad[0]), float(lo[1] - pad[1]), float(hi[1] + pad[1])


def _frame(x0: float, y0: float, w: float, h: float, title: str) -> List[str]:
    return [
        f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(w)}" height="{_f(h)}" fill="none" stroke="black"/>',
        f'<text x="{_f(x0 + w / 2)}" y="{_f(y0 - 8)}" text-anchor="middle" font-size="12">{title}</text>',
    ]


def _plane(points: np.ndarray) -> np.ndarray:
    """First two columns; a single column is drawn on the line y = 0."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[1] == 1:
        points = np.column_stack([points[:, 0], np.zeros(points.shape[0])])
    return points[:, :2]


def scatter_svg(data: np.ndarray, generated: np.ndarray, title: str = "") -> str:
    """
    Data points as small circles, generated points as crosses, in the plane of
    the first two columns. One-column batches (a one-dimensional critic) are
    drawn along the x axis.
    """
    series = [
        Series("data", _plane(data), "data", COLORS[0]),
        Series("generated", _plane(generated), "generated", COLORS[1]),
    ]
    if not any(s.points.size for s in series):
        raise ValueError("nothing to plot")
    xmin, xmax, ymin, ymax = _bounds([s.points for s in series])
    w, h = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(x):
        return MARGIN + (x - xmin) / (xmax - xmin) * w

    def sy(y):
        return MARGIN + h - (y - ymin) / (ymax - ymin) * h

    lines = _header(WIDTH, HEIGHT) + _frame(MARGIN, MARGIN, w, h, title)
    for s in series:
        for x, y in s.points:
            px, py = sx(x), sy(y)
            if s.css_class == "data":
                lines.append(f'<circle class="data" cx="{_f(px)}" cy="{_f(py)}" r="1.5" fill="{s.color}"/>')
            else:
                lines.append(
                    f'<path class="generated" d="M{_f(px - 2)} {_f(py - 2)}L{_f(px + 2)} {_f(py + 2)}'
                    f'M{_f(px - 2)} {_f(py + 2)}L{_f(px + 2)} {_f(py - 2)}" stroke="{s.color}"/>'
                )
    lines.append(f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - 12}" text-anchor="end" font-size="10" '
                 f'fill="{COLORS[0]}">o data</text>')
    lines.append(f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - 24}" text-anchor="end" font-size="10" '
                 f'fill="{COLORS[1]}">x model</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _log_points(iterations: np.ndarray, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    keep = np.isfinite(values) & (values > 0)
    return iterations[keep], np.log10(values[keep])


def _polyline(xs, ys, color: str, label: str) -> str:
    pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in zip(xs, ys))
    return f'<polyline class="trace" data-series="{label}" points="{pts}" fill="none" stroke="{color}"/>'


def trace_svg(
    iterations: np.ndarray,
    columns: Dict[str, np.ndarray],
    split_at: Optional[int] = 100,
    title: str = "",
) -> str:
    """
    Loss traces on a log10 y axis. With `split_at`, two panels share the y
    range: iterations up to `split_at` on the left, the rest on the right.
    Non-positive and missing values are skipped.
    """
    iterations = np.asarray(iterations, dtype=np.float64)
    if iterations.size == 0:
        raise ValueError("empty trace")
    logged = {name: _log_points(iterations, np.asarray(v, dtype=np.float64)) for name, v in columns.items()}
    all_y = np.concatenate([y for _, y in logged.values()]) if logged else np.array([])
    if all_y.size == 0:
        raise ValueError("trace has no positive finite values to plot on a log scale")
    ymin, ymax = float(np.floor(all_y.min())), float(np.ceil(all_y.max()))
    if ymax == ymin:
        ymax = ymin + 1.0

    last = float(iterations.max())
    if split_at is not None and 1 <= split_at < last:
        ranges = [(float(iterations.min()), float(split_at)), (float(split_at), last)]
    else:
        ranges = [(float(iterations.min()), last)]

    panel_w = (WIDTH - MARGIN * (len(ranges) + 1)) / len(ranges)
    h = HEIGHT - 2 * MARGIN
    lines = _header(WIDTH, HEIGHT)
    for p, (lo, hi) in enumerate(ranges):
        x0 = MARGIN + p * (panel_w + MARGIN)
        span = hi - lo if hi > lo else 1.0
        lines += _frame(x0, MARGIN, panel_w, h, f"{title} [{int(lo)}, {int(hi)}]".strip())
        for decade in range(int(ymin), int(ymax) + 1):
            y = MARGIN + h - (decade - ymin) / (ymax - ymin) * h
            lines.append(f'<text x="{_f(x0 - 4)}" y="{_f(y + 3)}" text-anchor="end" font-size="9">1e{decade}</text>')
        for k, (name, (xs, ys)) in enumerate(logged.items()):
            mask = (xs >= lo) & (xs <= hi)
            if not mask.any():
                continue
            px = x0 + (xs[mask] - lo) / span * panel_w
            py = MARGIN + h - (ys[mask] - ymin) / (ymax - ymin) * h
            lines.append(_polyline(px, py, COLORS[k % len(COLORS)], name))
    for k, name in enumerate(logged):
        lines.append(f'<text x="{MARGIN}" y="{_f(HEIGHT - 24 + 12 * k)}" font-size="10" '
                     f'fill="{COLORS[k % len(COLORS)]}">{name}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
