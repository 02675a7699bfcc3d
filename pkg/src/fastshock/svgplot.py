"""Minimal deterministic SVG line charts.

No timestamps, no randomness, fixed float formatting: identical inputs give
identical bytes, which the run artifacts are required to.
"""

from __future__ import annotations

import math

__all__ = ["line_chart", "write_svg"]

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2")


def _fmt(v: float) -> str:
    return format(float(v), ".6g")


def _nice_step(raw: float) -> float:
    mag = 10.0 ** math.floor(math.log10(raw))
    for f in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= f * mag * (1.0 + 1e-12):
            return f * mag
    return 10.0 * mag


def _linear_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = _nice_step((hi - lo) / target)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _decade_ticks(lo: float, hi: float) -> list[float]:
    lo_e = math.floor(math.log10(lo))
    hi_e = math.ceil(math.log10(hi))
    if hi_e - lo_e > 12:                   # thin out very tall ranges
        stride = math.ceil((hi_e - lo_e) / 12)
    else:
        stride = 1
    return [10.0 ** e for e in range(lo_e, hi_e + 1, stride)
            if lo <= 10.0 ** e <= hi * (1 + 1e-12)]


def line_chart(series, *, title: str = "", xlabel: str = "", ylabel: str = "",
               width: int = 720, height: int = 460, logy: bool = False,
               dashed: tuple = ()) -> str:
    """Render [(label, xs, ys), ...] as an SVG string.

    Labels in ``dashed`` get a dashed stroke. With ``logy``, points with
    y <= 0 are dropped.
    """
    ml, mr, mt, mb = 64, 16, 34, 48
    pw, ph = width - ml - mr, height - mt - mb

    pts = []
    for label, xs, ys in series:
        pair = [(float(x), float(y)) for x, y in zip(xs, ys)
                if not logy or y > 0.0]
        pts.append((str(label), pair))

    all_x = [p[0] for _, pair in pts for p in pair]
    all_y = [p[1] for _, pair in pts for p in pair]
    if not all_x:
        all_x, all_y = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(all_x), max(all_x)
    y_lo, y_hi = min(all_y), max(all_y)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if logy:
        if y_hi == y_lo:
            y_hi = y_lo * 10.0
        ty_lo, ty_hi = math.log10(y_lo), math.log10(y_hi)
    else:
        if y_hi == y_lo:
            y_hi = y_lo + 1.0
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad
        ty_lo, ty_hi = y_lo, y_hi

    def sx(x):
        return ml + pw * (x - x_lo) / (x_hi - x_lo)

    def sy(y):
        ty = math.log10(y) if logy else y
        return mt + ph * (1.0 - (ty - ty_lo) / (ty_hi - ty_lo))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
           f'stroke="#333333" stroke-width="1"/>']

    for xt in _linear_ticks(x_lo, x_hi):
        px = sx(xt)
        out.append(f'<line x1="{px:.2f}" y1="{mt + ph}" x2="{px:.2f}" '
                   f'y2="{mt + ph + 5}" stroke="#333333"/>')
        out.append(f'<text x="{px:.2f}" y="{mt + ph + 18}" font-size="11" '
                   f'text-anchor="middle" font-family="sans-serif">{_fmt(xt)}</text>')
    yticks = _decade_ticks(y_lo, y_hi) if logy else _linear_ticks(y_lo, y_hi)
    for yt in yticks:
        py = sy(yt)
        out.append(f'<line x1="{ml - 5}" y1="{py:.2f}" x2="{ml}" '
                   f'y2="{py:.2f}" stroke="#333333"/>')
        out.append(f'<text x="{ml - 8}" y="{py + 4:.2f}" font-size="11" '
                   f'text-anchor="end" font-family="sans-serif">{_fmt(yt)}</text>')

    for i, (label, pair) in enumerate(pts):
        if not pair:
            continue
        color = PALETTE[i % len(PALETTE)]
        d = " ".join(f"{'M' if j == 0 else 'L'}{sx(x):.2f},{sy(y):.2f}"
                     for j, (x, y) in enumerate(pair))
        dash = ' stroke-dasharray="6,4"' if label in dashed else ""
        out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')

    lx, ly = ml + pw - 150, mt + 10
    for i, (label, pair) in enumerate(pts):
        color = PALETTE[i % len(PALETTE)]
        dash = ' stroke-dasharray="6,4"' if label in dashed else ""
        out.append(f'<line x1="{lx}" y1="{ly + 16 * i}" x2="{lx + 22}" '
                   f'y2="{ly + 16 * i}" stroke="{color}" stroke-width="1.5"{dash}/>')
        out.append(f'<text x="{lx + 28}" y="{ly + 16 * i + 4}" font-size="11" '
                   f'font-family="sans-serif">{label}</text>')

    if title:
        out.append(f'<text x="{ml + pw / 2:.1f}" y="{mt - 12}" font-size="13" '
                   f'text-anchor="middle" font-family="sans-serif">{title}</text>')
    if xlabel:
        out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" font-size="12" '
                   f'text-anchor="middle" font-family="sans-serif">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{mt + ph / 2:.1f}" font-size="12" '
                   f'text-anchor="middle" font-family="sans-serif" '
                   f'transform="rotate(-90 16 {mt + ph / 2:.1f})">{ylabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, content: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)
