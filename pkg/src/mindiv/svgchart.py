"""Self-contained SVG convergence charts (no plotting dependency).

One chart: estimates against sample size on a log10 axis, every
replication as a dot, per-n medians joined by a line, and a dashed
horizontal line at the true value.  Output is plain well-formed XML with
no external references.
"""

from __future__ import annotations

import math
from typing import Dict, Sequence
from xml.sax.saxutils import escape

_WIDTH, _HEIGHT = 640.0, 420.0
_LEFT, _RIGHT, _TOP, _BOTTOM = 72.0, 24.0, 48.0, 56.0


def _nice_ticks(lo: float, hi: float, count: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(count - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * abs(step):
        ticks.append(0.0 if abs(t) < 1e-15 else t)
        t += step
    return ticks


def _median(values: Sequence[float]) -> float:
    vals = sorted(values)
    k = len(vals)
    mid = k // 2
    return vals[mid] if k % 2 else 0.5 * (vals[mid - 1] + vals[mid])


def convergence_chart_svg(estimates_by_n: Dict[int, Sequence[float]],
                          true_value: float, title: str, ylabel: str) -> str:
    """Render the chart as an SVG string."""
    ns = sorted(n for n, est in estimates_by_n.items() if est)
    if not ns:
        raise ValueError("nothing to plot: no estimates supplied")
    xs_log = [math.log10(n) for n in ns]
    x_lo, x_hi = min(xs_log), max(xs_log)
    if x_hi - x_lo < 1e-9:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    all_vals = [v for n in ns for v in estimates_by_n[n]] + [true_value]
    y_lo, y_hi = min(all_vals), max(all_vals)
    pad = 0.1 * (y_hi - y_lo) if y_hi > y_lo else max(0.1, 0.1 * abs(y_hi))
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = _WIDTH - _LEFT - _RIGHT
    plot_h = _HEIGHT - _TOP - _BOTTOM

    def px(logn: float) -> float:
        return _LEFT + (logn - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return _TOP + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:.0f}" '
        f'height="{_HEIGHT:.0f}" viewBox="0 0 {_WIDTH:.0f} {_HEIGHT:.0f}">',
        f'<rect width="{_WIDTH:.0f}" height="{_HEIGHT:.0f}" fill="white"/>',
        f'<text x="{_WIDTH / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{escape(title)}</text>',
    ]

    # axes
    x0, y0 = _LEFT, _TOP + plot_h
    parts.append(f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x0 + plot_w:.1f}" '
                 f'y2="{y0:.1f}" stroke="black" stroke-width="1"/>')
    parts.append(f'<line x1="{x0:.1f}" y1="{_TOP:.1f}" x2="{x0:.1f}" '
                 f'y2="{y0:.1f}" stroke="black" stroke-width="1"/>')

    for n, logn in zip(ns, xs_log):
        x = px(logn)
        parts.append(f'<line x1="{x:.1f}" y1="{y0:.1f}" x2="{x:.1f}" '
                     f'y2="{y0 + 5:.1f}" stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{x:.1f}" y="{y0 + 20:.1f}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{n}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        y = py(t)
        parts.append(f'<line x1="{x0 - 5:.1f}" y1="{y:.1f}" x2="{x0:.1f}" '
                     f'y2="{y:.1f}" stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{x0 - 9:.1f}" y="{y + 4:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{t:.4g}</text>')

    parts.append(f'<text x="{x0 + plot_w / 2:.1f}" y="{_HEIGHT - 14:.1f}" '
                 f'text-anchor="middle" font-family="sans-serif" font-size="12">'
                 f'sample size n (log scale)</text>')
    parts.append(f'<text x="20" y="{_TOP + plot_h / 2:.1f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12" '
                 f'transform="rotate(-90 20 {_TOP + plot_h / 2:.1f})">'
                 f'{escape(ylabel)}</text>')

    # dashed true-value line
    yt = py(true_value)
    parts.append(f'<line x1="{x0:.1f}" y1="{yt:.1f}" x2="{x0 + plot_w:.1f}" '
                 f'y2="{yt:.1f}" stroke="crimson" stroke-width="1.2" '
                 f'stroke-dasharray="6,4"/>')

    # replication scatter
    for n, logn in zip(ns, xs_log):
        x = px(logn)
        for v in estimates_by_n[n]:
            parts.append(f'<circle cx="{x:.1f}" cy="{py(v):.1f}" r="2.6" '
                         f'fill="steelblue" fill-opacity="0.45"/>')

    # per-n medians
    med_pts = [(px(logn), py(_median(estimates_by_n[n])))
               for n, logn in zip(ns, xs_log)]
    if len(med_pts) > 1:
        path = " ".join(f"{x:.1f},{y:.1f}" for x, y in med_pts)
        parts.append(f'<polyline points="{path}" fill="none" '
                     f'stroke="navy" stroke-width="1.6"/>')
    for x, y in med_pts:
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3.4" fill="navy"/>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_convergence_chart(estimates_by_n: Dict[int, Sequence[float]],
                            true_value: float, title: str, ylabel: str,
                            path) -> None:
    svg = convergence_chart_svg(estimates_by_n, true_value, title, ylabel)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(svg)
