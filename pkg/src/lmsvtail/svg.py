"""Minimal SVG line charts: axes, ticks, one polyline per series and a legend."""
from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 150, 40, 50


@dataclass
class Series:
    label: str
    points: list
    color: str


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list:
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _bounds(values):
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        return 0.0, 1.0
    lo, hi = min(finite), max(finite)
    if hi == lo:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def render_line_chart(series: list, *, title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    xs = [x for s in series for x, _ in s.points]
    ys = [y for s in series for _, y in s.points]
    x0, x1 = _bounds(xs)
    y0, y1 = _bounds(ys)
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{MARGIN_L + pw / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T + ph}" x2="{MARGIN_L + pw}" y2="{MARGIN_T + ph}" stroke="black"/>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{MARGIN_T + ph}" stroke="black"/>',
    ]
    for t in _nice_ticks(x0, x1):
        out.append(f'<line x1="{px(t):.2f}" y1="{MARGIN_T + ph}" x2="{px(t):.2f}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y0, y1):
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{py(t):.2f}" x2="{MARGIN_L}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{py(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{MARGIN_T + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {MARGIN_T + ph / 2:.1f})">{escape(ylabel)}</text>')
    for i, s in enumerate(series):
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in s.points if math.isfinite(y))
        out.append(f'<polyline fill="none" stroke="{s.color}" stroke-width="1.2" points="{pts}"/>')
        ly = MARGIN_T + 10 + 18 * i
        lx = WIDTH - MARGIN_R + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{s.color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_line_chart(path, series: list, **kwargs) -> None:
    text = render_line_chart(series, **kwargs)
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
