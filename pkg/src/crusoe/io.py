"""CSV and SVG emitters.

Numbers are written with 12 significant digits; a write/read round trip is
therefore lossy beyond ~1e-12 relative.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .core import Trajectory
from .exchange import ExchangeTrajectory

EXCHANGE_HEADER = ("t", "QB_RC", "QC_RC", "QB_D", "QC_D", "U_RC", "U_D")


class CSVFormatError(OSError):
    """Input file exists but is not a readable signal table."""


def fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # no "-0"
    return f"{x:.12g}"


def _write_table(path, header: Sequence[str], columns: Sequence[np.ndarray]) -> None:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*columns):
        buf.write(",".join(fmt(x) for x in row) + "\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="\n")


def write_trajectory_csv(path, traj: Trajectory, names: Sequence[str] = ("Q_B", "Q_C")) -> None:
    names = [n for n in names if n in traj.signals] or traj.names
    _write_table(path, ["t", *names], [traj.times, *(traj[n] for n in names)])


def write_exchange_csv(path, traj: ExchangeTrajectory) -> None:
    cols = traj.columns()
    _write_table(path, EXCHANGE_HEADER, [traj.times, *(cols[h] for h in EXCHANGE_HEADER[1:])])


def read_table(path) -> dict[str, np.ndarray]:
    text = Path(path).read_text(encoding="utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if len(rows) < 2:
        raise CSVFormatError(f"{path}: need a header and at least one data row")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise CSVFormatError(f"{path}: duplicate column names in {header}")
    try:
        data = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise CSVFormatError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise CSVFormatError(f"{path}: ragged rows")
    return {h: data[:, i] for i, h in enumerate(header)}


def read_trajectory_csv(path) -> Trajectory:
    table = read_table(path)
    if "t" not in table:
        raise CSVFormatError(f"{path}: first column must be 't'")
    times = table.pop("t")
    return Trajectory(times, table)


def svg_plot(series: Mapping[str, tuple[np.ndarray, np.ndarray]], title: str = "",
             width: int = 640, height: int = 400) -> str:
    """One polyline per series, with axes, tick labels and a legend."""
    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    left, right, top, bottom = 60, 20, 30, 40
    xs = np.concatenate([np.asarray(x, dtype=float) for x, _ in series.values()])
    ys = np.concatenate([np.asarray(y, dtype=float) for _, y in series.values()])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(min(ys.min(), 0.0)), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
        f'<text x="{left + pw / 2:.1f}" y="{height - 8}" text-anchor="middle" font-size="12">t</text>',
        f'<text x="{left + pw / 2:.1f}" y="18" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for frac in (0.0, 0.5, 1.0):
        xv, yv = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
        out.append(f'<text x="{px(xv):.1f}" y="{top + ph + 16}" text-anchor="middle" font-size="10">{fmt(xv)}</text>')
        out.append(f'<text x="{left - 6}" y="{py(yv) + 4:.1f}" text-anchor="end" font-size="10">{fmt(yv)}</text>')
    for i, (name, (x, y)) in enumerate(series.items()):
        color = colors[i % len(colors)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{left + pw - 4}" y="{top + 14 + 14 * i}" text-anchor="end" '
                   f'font-size="11" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, traj: Trajectory, title: str = "", max_points: int = 2000) -> None:
    stride = max(1, len(traj) // max_points)
    series = {n: (traj.times[::stride], traj[n][::stride]) for n in traj.names}
    Path(path).write_text(svg_plot(series, title), encoding="utf-8", newline="\n")
