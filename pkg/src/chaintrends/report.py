"""Deterministic SVG line charts and heatmaps.

Both renderers build the document as plain text with fixed number formatting,
so identical inputs produce byte-identical files.
"""
from __future__ import annotations

from datetime import date
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

from .errors import DataError
from .series import DailySeries
from .xcorr import XCorrMatrix

WIDTH, HEIGHT = 960, 540
MARGIN_X, MARGIN_Y = WIDTH * 0.1, HEIGHT * 0.1
LEFT, RIGHT = MARGIN_X, WIDTH - MARGIN_X
TOP, BOTTOM = MARGIN_Y, HEIGHT - MARGIN_Y

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
LOW_RGB = (247, 251, 255)
HIGH_RGB = (8, 48, 107)
Y_TICKS = 5


def _num(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _header(title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text class="title" x="{_num(WIDTH / 2)}" y="{_num(MARGIN_Y / 2)}" text-anchor="middle" '
        f'font-size="16">{escape(title)}</text>',
    ]


def _write(doc: str, out) -> None:
    if out is not None:
        Path(out).write_text(doc, encoding="utf-8", newline="\n")


def render_lines(series: Sequence[DailySeries], title: str = "", out=None) -> str:
    """One polyline per series over a shared date axis with year ticks."""
    if not series:
        raise DataError("no series to render")
    for s in series:
        if len(s) < 2:
            raise DataError(f"series {s.name!r} needs at least 2 points to draw")
    first = min(s.start_date for s in series)
    last = max(s.end_date for s in series)
    span = max((last - first).days, 1)
    lo = min(min(s.values) for s in series)
    hi = max(max(s.values) for s in series)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5

    def x_of(d: date) -> float:
        return LEFT + (d - first).days / span * (RIGHT - LEFT)

    def y_of(v: float) -> float:
        return BOTTOM - (v - lo) / (hi - lo) * (BOTTOM - TOP)

    parts = _header(title)
    parts.append('<g class="axes" stroke="#333333" fill="none">')
    parts.append(f'<line x1="{_num(LEFT)}" y1="{_num(BOTTOM)}" x2="{_num(RIGHT)}" y2="{_num(BOTTOM)}"/>')
    parts.append(f'<line x1="{_num(LEFT)}" y1="{_num(TOP)}" x2="{_num(LEFT)}" y2="{_num(BOTTOM)}"/>')
    parts.append("</g>")

    parts.append('<g class="xticks" text-anchor="middle">')
    for year in range(first.year, last.year + 1):
        jan1 = date(year, 1, 1)
        if not first <= jan1 <= last:
            continue
        x = _num(x_of(jan1))
        parts.append(f'<line x1="{x}" y1="{_num(BOTTOM)}" x2="{x}" y2="{_num(BOTTOM + 6)}" stroke="#333333"/>')
        parts.append(f'<text x="{x}" y="{_num(BOTTOM + 20)}">{year}</text>')
    parts.append("</g>")

    parts.append('<g class="yticks" text-anchor="end">')
    for i in range(Y_TICKS):
        v = lo + (hi - lo) * i / (Y_TICKS - 1)
        y = _num(y_of(v))
        parts.append(f'<line x1="{_num(LEFT - 6)}" y1="{y}" x2="{_num(LEFT)}" y2="{y}" stroke="#333333"/>')
        parts.append(f'<text x="{_num(LEFT - 10)}" y="{y}" dominant-baseline="middle">{v:.4g}</text>')
    parts.append("</g>")

    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{_num(x_of(d))},{_num(y_of(v))}" for d, v in zip(s.dates, s.values))
        parts.append(f'<polyline class="series" data-name={quoteattr(s.name)} fill="none" '
                     f'stroke="{color}" stroke-width="1.5" points="{points}"/>')

    parts.append('<g class="legend">')
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        y = TOP + 14 + 18 * i
        x = RIGHT - 150
        parts.append(f'<line x1="{_num(x)}" y1="{_num(y)}" x2="{_num(x + 24)}" y2="{_num(y)}" '
                     f'stroke="{color}" stroke-width="3"/>')
        parts.append(f'<text class="legend-entry" x="{_num(x + 30)}" y="{_num(y)}" '
                     f'dominant-baseline="middle">{escape(s.name)}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    doc = "\n".join(parts) + "\n"
    _write(doc, out)
    return doc


def _color(t: float) -> str:
    rgb = (round(a + (b - a) * t) for a, b in zip(LOW_RGB, HIGH_RGB))
    return "#" + "".join(f"{c:02x}" for c in rgb)


def render_heatmap(m: XCorrMatrix, out=None, title: str = "") -> str:
    """Square grid of max-correlation cells, each labelled with its value."""
    n = len(m.names)
    if n == 0 or len(m.max_corr) != n or any(len(row) != n for row in m.max_corr):
        raise DataError("heatmap needs a non-empty square matrix")
    values = [v for row in m.max_corr for v in row]
    lo, hi = min(values), max(values)
    side = BOTTOM - TOP
    cell = side / n
    x0 = (WIDTH - side) / 2
    y0 = TOP

    parts = _header(title)
    parts.append('<g class="cells">')
    for i, row in enumerate(m.max_corr):
        for j, v in enumerate(row):
            t = 0.5 if hi == lo else (v - lo) / (hi - lo)
            x, y = x0 + j * cell, y0 + i * cell
            parts.append(f'<rect class="cell" x="{_num(x)}" y="{_num(y)}" width="{_num(cell)}" '
                         f'height="{_num(cell)}" fill="{_color(t)}" stroke="#ffffff"/>')
            ink = "#ffffff" if t > 0.5 else "#000000"
            parts.append(f'<text class="value" x="{_num(x + cell / 2)}" y="{_num(y + cell / 2)}" '
                         f'text-anchor="middle" dominant-baseline="middle" fill="{ink}">{v:.2f}</text>')
    parts.append("</g>")

    parts.append('<g class="labels">')
    for i, name in enumerate(m.names):
        mid = _num(y0 + (i + 0.5) * cell)
        parts.append(f'<text class="row-label" x="{_num(x0 - 8)}" y="{mid}" text-anchor="end" '
                     f'dominant-baseline="middle">{escape(name)}</text>')
    for j, name in enumerate(m.names):
        mid = _num(x0 + (j + 0.5) * cell)
        parts.append(f'<text class="col-label" x="{mid}" y="{_num(y0 + side + 18)}" '
                     f'text-anchor="middle">{escape(name)}</text>')
    parts.append("</g>")

    bar_x = x0 + side + 24
    parts.append('<defs><linearGradient id="scale" x1="0" y1="1" x2="0" y2="0">'
                 f'<stop offset="0" stop-color="{_color(0)}"/><stop offset="1" stop-color="{_color(1)}"/>'
                 '</linearGradient></defs>')
    parts.append(f'<g class="scale"><rect x="{_num(bar_x)}" y="{_num(y0)}" width="16" height="{_num(side)}" '
                 'fill="url(#scale)" stroke="#333333"/>')
    parts.append(f'<text x="{_num(bar_x + 22)}" y="{_num(y0 + 6)}">{hi:.2f}</text>')
    parts.append(f'<text x="{_num(bar_x + 22)}" y="{_num(y0 + side)}">{lo:.2f}</text></g>')
    parts.append("</svg>")
    doc = "\n".join(parts) + "\n"
    _write(doc, out)
    return doc
