"""Minimal standalone SVG line plots.

The first series is drawn as a solid line, the last one (when there are
several) as a line with circle markers, intermediate series dashed.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .exceptions import GridMismatchError, ValidationError
from .signal import Trajectory

__all__ = ["render_svg"]

WIDTH, HEIGHT, MARGIN = 800, 400, 40
MAX_VERTICES = 2000
COLORS = ("#1f4e79", "#c55a11", "#2e7d32", "#6a1b9a", "#616161")


def _split(series):
    if isinstance(series, Trajectory):
        series = [series]
    named = []
    for traj in series:
        for name in traj.channels:
            named.append((name, traj.grid, traj.channel(name)))
    if not named:
        raise ValidationError("nothing to plot")
    grid = named[0][1]
    for name, g, _ in named:
        if g != grid:
            raise GridMismatchError(f"series {name!r} is on a different grid")
    return grid, [(name, v) for name, _, v in named]


def _fmt(x):
    return f"{x:.2f}"


def render_svg(series, path, marker_stride=None, title=None):
    """Write the channels of ``series`` (a trajectory or a list of them) to ``path``.

    ``marker_stride`` spaces the circle markers of the last series in
    samples; by default about 40 markers are drawn.
    """
    grid, named = _split(series)
    t = grid.times
    ys = np.concatenate([v for _, v in named])
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if y_hi == y_lo:
        pad = 0.5 * abs(y_lo) if y_lo else 1.0
        y_lo, y_hi = y_lo - pad, y_hi + pad
    t_lo, t_hi = float(t[0]), float(t[-1])
    plot_w, plot_h = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(v):
        return MARGIN + (v - t_lo) / (t_hi - t_lo) * plot_w

    def sy(v):
        return HEIGHT - MARGIN - (v - y_lo) / (y_hi - y_lo) * plot_h

    n = grid.n
    step = max(1, -(-n // MAX_VERTICES))
    idx = np.arange(0, n, step)
    if idx[-1] != n - 1:
        idx = np.append(idx, n - 1)
    if marker_stride is None:
        marker_stride = max(1, n // 40)
    if marker_stride < 1:
        raise ValidationError(f"marker stride must be positive, got {marker_stride}")

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#999" stroke-width="1"/>',
    ]
    if y_lo < 0 < y_hi:
        out.append(
            f'<line x1="{MARGIN}" y1="{_fmt(sy(0.0))}" x2="{WIDTH - MARGIN}" '
            f'y2="{_fmt(sy(0.0))}" stroke="#ccc" stroke-width="1"/>'
        )
    font = 'font-family="sans-serif" font-size="11"'
    label = font + ' fill="#333"'
    out += [
        f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 15}" {label}>{t_lo:.4g}</text>',
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 15}" text-anchor="end" {label}>'
        f"{t_hi:.4g}</text>",
        f'<text x="{MARGIN - 4}" y="{MARGIN + 4}" text-anchor="end" {label}>{y_hi:.4g}</text>',
        f'<text x="{MARGIN - 4}" y="{HEIGHT - MARGIN}" text-anchor="end" {label}>{y_lo:.4g}</text>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="{MARGIN - 14}" text-anchor="middle" {label}>'
                   f"{escape(title)}</text>")

    last = len(named) - 1
    for j, (name, v) in enumerate(named):
        color = COLORS[j % len(COLORS)]
        points = " ".join(f"{_fmt(sx(t[i]))},{_fmt(sy(v[i]))}" for i in idx)
        dash = ' stroke-dasharray="6 4"' if 0 < j < last else ""
        out.append(
            f'<polyline id="series-{escape(name)}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"{dash} points="{points}"/>'
        )
        if j == last and last > 0:
            out.append(f'<g id="markers-{escape(name)}" fill="none" stroke="{color}">')
            for i in range(0, n, marker_stride):
                out.append(f'<circle cx="{_fmt(sx(t[i]))}" cy="{_fmt(sy(v[i]))}" r="3"/>')
            out.append("</g>")
        out.append(
            f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 14 + 14 * j}" text-anchor="end" '
            f'{font} fill="{color}">{escape(name)}</text>'
        )
    out.append("</svg>")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(out) + "\n")
