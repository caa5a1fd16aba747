"""Static SVG scatter of scan points with the fitted bound curve.

Self-contained output: no plotting dependency, deterministic byte-for-byte
for identical inputs.  The x-axis is the cost product on a log10 scale, the
y-axis the entropy; in-window points are drawn solid, out-of-window points
hollow, and the curve entropy = log(alpha sqrt(product) + 1) is a single
path element.
"""

from __future__ import annotations

import math
from typing import Sequence

from .scan import BoundFit, CostPoint

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 20, 50
CURVE_SAMPLES = 256


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _Frame:
    """Affine map from (log10 product, entropy) to pixel coordinates."""

    def __init__(self, x_lo: float, x_hi: float, y_lo: float, y_hi: float):
        self.x_lo, self.x_hi = x_lo, x_hi
        self.y_lo, self.y_hi = y_lo, y_hi

    def px(self, x: float) -> float:
        t = (x - self.x_lo) / (self.x_hi - self.x_lo)
        return MARGIN_L + t * (WIDTH - MARGIN_L - MARGIN_R)

    def py(self, y: float) -> float:
        t = (y - self.y_lo) / (self.y_hi - self.y_lo)
        return HEIGHT - MARGIN_B - t * (HEIGHT - MARGIN_T - MARGIN_B)


def render_svg(
    points: Sequence[CostPoint],
    window: tuple[float, float],
    fit: BoundFit | None = None,
) -> str:
    """Render the scatter (and the bound curve, when a fit is given) to SVG."""
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    drawable = [p for p in points if p.product > 0.0]
    if drawable:
        logs = [math.log10(p.product) for p in drawable]
        entropies = [p.entropy for p in drawable]
        x_lo, x_hi = min(logs), max(logs)
        if x_hi - x_lo < 1e-9:
            x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
        y_lo, y_hi = 0.0, max(max(entropies), 1e-6) * 1.05
        frame = _Frame(x_lo, x_hi, y_lo, y_hi)
    else:
        frame = _Frame(0.0, 2.0, 0.0, 1.0)

    # axes
    x0, y0 = frame.px(frame.x_lo), frame.py(frame.y_lo)
    x1, y1 = frame.px(frame.x_hi), frame.py(frame.y_hi)
    lines.append(
        f'<g class="axes" stroke="black" stroke-width="1">'
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y0)}"/>'
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" y2="{_fmt(y1)}"/>'
        f"</g>"
    )
    # decade ticks on x, integer ticks on y
    tick_parts = []
    for exp in range(math.floor(frame.x_lo), math.floor(frame.x_hi) + 1):
        if frame.x_lo <= exp <= frame.x_hi:
            tx = frame.px(exp)
            tick_parts.append(
                f'<line x1="{_fmt(tx)}" y1="{_fmt(y0)}" x2="{_fmt(tx)}" '
                f'y2="{_fmt(y0 + 5)}" stroke="black"/>'
                f'<text x="{_fmt(tx)}" y="{_fmt(y0 + 18)}" font-size="11" '
                f'text-anchor="middle">1e{exp}</text>'
            )
    for tick in range(0, math.floor(frame.y_hi) + 1):
        ty = frame.py(tick)
        tick_parts.append(
            f'<line x1="{_fmt(x0 - 5)}" y1="{_fmt(ty)}" x2="{_fmt(x0)}" '
            f'y2="{_fmt(ty)}" stroke="black"/>'
            f'<text x="{_fmt(x0 - 8)}" y="{_fmt(ty + 4)}" font-size="11" '
            f'text-anchor="end">{tick}</text>'
        )
    lines.append(f'<g class="ticks">{"".join(tick_parts)}</g>')
    lines.append(
        f'<text x="{_fmt((x0 + x1) / 2)}" y="{HEIGHT - 10}" font-size="13" '
        f'text-anchor="middle">cost product tr(rho H) tr(rho Q^2)</text>'
    )
    lines.append(
        f'<text x="16" y="{_fmt((y0 + y1) / 2)}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {_fmt((y0 + y1) / 2)})">entropy S(rho)</text>'
    )

    if drawable:
        circle_parts = []
        for p in drawable:
            cx, cy = frame.px(math.log10(p.product)), frame.py(p.entropy)
            if p.in_window(window):
                style = 'class="pt in" fill="steelblue" fill-opacity="0.7"'
            else:
                style = 'class="pt out" fill="none" stroke="grey" stroke-opacity="0.5"'
            circle_parts.append(
                f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2.2" {style}/>'
            )
        lines.append(f'<g class="points">{"".join(circle_parts)}</g>')

    if fit is not None and drawable:
        steps = []
        for k in range(CURVE_SAMPLES + 1):
            lx = frame.x_lo + (frame.x_hi - frame.x_lo) * k / CURVE_SAMPLES
            s = math.log(fit.alpha * math.sqrt(10.0**lx) + 1.0)
            cmd = "M" if k == 0 else "L"
            steps.append(f"{cmd}{_fmt(frame.px(lx))} {_fmt(frame.py(s))}")
        lines.append(
            f'<path id="bound-curve" d="{" ".join(steps)}" fill="none" '
            f'stroke="crimson" stroke-width="1.5"/>'
        )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(
    points: Sequence[CostPoint],
    window: tuple[float, float],
    fit: BoundFit | None,
    path,
) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(render_svg(points, window, fit))
