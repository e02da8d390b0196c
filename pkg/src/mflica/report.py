"""Line charts of several time series as standalone SVG, with a CSV sibling."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import EmptyBundle, IoFailure, ValidationError

WIDTH, HEIGHT = 800, 400
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 60, 150, 40, 50
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


@dataclass(frozen=True, eq=False)
class SeriesBundle:
    labels: tuple
    values: np.ndarray  # (M, T)
    title: str = ""

    def __post_init__(self):
        values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        labels = tuple(str(x) for x in self.labels)
        if len(labels) == 0 or values.size == 0:
            raise EmptyBundle("nothing to plot")
        if len(labels) != values.shape[0]:
            raise ValidationError(f"{len(labels)} labels for {values.shape[0]} series")
        if not np.all(np.isfinite(values)):
            raise ValidationError("bundle contains NaN or Inf")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(bundle: SeriesBundle) -> str:
    values = bundle.values
    m, n_steps = values.shape
    y_lo = min(0.0, float(values.min()))
    y_hi = max(1.0, float(values.max()))
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(t):
        if n_steps == 1:
            return MARGIN_LEFT + plot_w / 2
        return MARGIN_LEFT + (t - 1) / (n_steps - 1) * plot_w

    def sy(v):
        return MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(bundle.title)}</text>',
    ]
    x0, x1 = MARGIN_LEFT, MARGIN_LEFT + plot_w
    y0, y1 = MARGIN_TOP + plot_h, MARGIN_TOP
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        v = y_lo + frac * (y_hi - y_lo)
        out.append(
            f'<text x="{x0 - 6}" y="{_fmt(sy(v) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{v:g}</text>'
        )
    for t in sorted({1, (n_steps + 1) // 2, n_steps}):
        out.append(
            f'<text x="{_fmt(sx(t))}" y="{y0 + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{t}</text>'
        )
    out.append(
        f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">time step</text>'
    )
    out.append(
        f'<text x="16" y="{(y0 + y1) / 2}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 16 {(y0 + y1) / 2})">value</text>'
    )
    for k in range(m):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{_fmt(sx(t + 1))},{_fmt(sy(v))}" for t, v in enumerate(values[k]))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}">'
            f"<title>{escape(bundle.labels[k])}</title></polyline>"
        )
        ly = MARGIN_TOP + 14 * k + 6
        out.append(
            f'<line x1="{x1 + 12}" y1="{ly}" x2="{x1 + 32}" y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{x1 + 38}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="10">{escape(bundle.labels[k])}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_series_csv(bundle: SeriesBundle, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", *bundle.labels])
        for t in range(bundle.values.shape[1]):
            writer.writerow([t + 1, *(repr(float(v)) for v in bundle.values[:, t])])


def read_series_csv(path, title: str = "") -> SeriesBundle:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    labels = rows[0][1:]
    values = np.array([[float(c) for c in row[1:]] for row in rows[1:]]).T
    return SeriesBundle(tuple(labels), values, title)


def emit_plot(bundle: SeriesBundle, path) -> Path:
    """Write ``path`` (SVG) and a sibling ``.csv`` with the plotted numbers."""
    path = Path(path)
    try:
        path.write_text(render_svg(bundle), encoding="utf-8")
        write_series_csv(bundle, path.with_suffix(".csv"))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path
