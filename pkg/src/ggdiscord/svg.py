"""Minimal SVG plots: axes, points and polylines, nothing else.

The output depends only on the data passed in, so a plot regenerated from
the same CSV is byte-identical.
"""

from __future__ import annotations

import math
from typing import Sequence

WIDTH, HEIGHT, MARGIN = 640, 480, 60


def _fmt(x: float) -> str:
    return format(x, ".6g")


def _extent(values):
    finite = [v for v in values if v is not None and math.isfinite(v)]
    if not finite:
        return 0.0, 1.0
    lo, hi = min(finite), max(finite)
    if hi == lo:
        hi = lo + 1.0
    return lo, hi


def plot(series: Sequence[dict], xlabel: str = "", ylabel: str = "") -> str:
    """Render ``series`` entries ``{"x": [...], "y": [...], "kind": "points"|"line"}``."""
    xs = [x for s in series for x in s["x"]]
    ys = [y for s in series for y in s["y"]]
    x0, x1 = _extent(xs)
    y0, y1 = _extent(ys)
    w, h = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def px(x):
        return MARGIN + (x - x0) / (x1 - x0) * w

    def py(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{h}" fill="none" stroke="black"/>',
        f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 16}" font-size="11">{_fmt(x0)}</text>',
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 16}" font-size="11" text-anchor="end">{_fmt(x1)}</text>',
        f'<text x="{MARGIN - 4}" y="{HEIGHT - MARGIN}" font-size="11" text-anchor="end">{_fmt(y0)}</text>',
        f'<text x="{MARGIN - 4}" y="{MARGIN + 10}" font-size="11" text-anchor="end">{_fmt(y1)}</text>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" font-size="13" text-anchor="middle">{xlabel}</text>',
        f'<text x="15" y="{HEIGHT / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 15 {HEIGHT / 2})">{ylabel}</text>',
    ]
    for s in series:
        pts = [(x, y) for x, y in zip(s["x"], s["y"])
               if x is not None and y is not None and math.isfinite(x) and math.isfinite(y)]
        if s.get("kind", "points") == "line":
            if pts:
                coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
                dash = ' stroke-dasharray="3,3"' if s.get("dashed") else ""
                out.append(f'<polyline points="{coords}" fill="none" stroke="black"{dash}/>')
        else:
            out.extend(
                f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="1.2" fill="gray"/>' for x, y in pts
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
