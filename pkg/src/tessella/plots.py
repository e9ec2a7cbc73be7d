"""Deterministic SVG and CSV emitters.

Rendering is the only place exact rationals are rounded: coordinates are
formatted to six decimal places, 100 pixels per unit, and nothing is read
back from a plot. Identical inputs produce byte-identical files.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .boxes import FrameRegion
from .errors import InvalidInput
from .linalg import mat_vec

SCALE = 100  # pixels per coordinate unit

PALETTE = (
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759",
    "#b07aa1", "#76b7b2", "#edc948", "#9c755f",
)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def _box_polygon(region: FrameRegion, box) -> list[tuple[float, float]]:
    (a1, b1), (a2, b2) = box
    corners = ((a1, a2), (b1, a2), (b1, b2), (a1, b2))
    pts = []
    for c in corners:
        p = mat_vec(region.frame, (Fraction(c[0]), Fraction(c[1])))
        pts.append((float(p[0]), float(p[1])))
    return pts


def regions_svg(regions: Sequence[FrameRegion]) -> str:
    """Render 2-D regions as filled parallelogram groups, one palette
    color per region, y axis pointing up."""
    if not regions:
        raise InvalidInput("nothing to draw")
    if any(r.dim != 2 for r in regions):
        raise InvalidInput("SVG rendering is two-dimensional only")
    polys = []
    for i, region in enumerate(regions):
        color = PALETTE[i % len(PALETTE)]
        for box in region.boxes:
            polys.append((color, _box_polygon(region, box)))
    xs = [x for _, poly in polys for x, _ in poly]
    ys = [y for _, poly in polys for _, y in poly]
    margin = 0.1
    x0, x1 = min(xs) - margin, max(xs) + margin
    y0, y1 = min(ys) - margin, max(ys) + margin
    width = (x1 - x0) * SCALE
    height = (y1 - y0) * SCALE
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
    ]
    for color, poly in polys:
        pts = " ".join(
            f"{_fmt((x - x0) * SCALE)},{_fmt((y1 - y) * SCALE)}" for x, y in poly
        )
        lines.append(
            f'<polygon points="{pts}" fill="{color}" fill-opacity="0.6" '
            f'stroke="#222222" stroke-width="1"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def line_svg(xs: Sequence[float], ys: Sequence[float],
             x_label: str, y_label: str) -> str:
    """A single polyline with axes and corner labels."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise InvalidInput("a line plot needs at least two points")
    width, height, pad = 640.0, 420.0, 50.0
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(x: float) -> float:
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y: float) -> float:
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<line x1="{_fmt(pad)}" y1="{_fmt(height - pad)}" x2="{_fmt(width - pad)}" '
        f'y2="{_fmt(height - pad)}" stroke="#222222" stroke-width="1"/>',
        f'<line x1="{_fmt(pad)}" y1="{_fmt(pad)}" x2="{_fmt(pad)}" '
        f'y2="{_fmt(height - pad)}" stroke="#222222" stroke-width="1"/>',
        f'<polyline points="{pts}" fill="none" stroke="{PALETTE[0]}" '
        f'stroke-width="2"/>',
        f'<text x="{_fmt(width - pad)}" y="{_fmt(height - 12.0)}" '
        f'text-anchor="end" font-size="14">{x_label}</text>',
        f'<text x="{_fmt(12.0)}" y="{_fmt(pad - 12.0)}" font-size="14">{y_label}</text>',
        "</svg>",
    ]) + "\n"


def csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise InvalidInput("CSV row width does not match the header")
        lines.append(",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"
