"""Minimal deterministic SVG line charts."""

from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def _fmt(v):
    return f"{v:.2f}"


def _ticks(lo, hi, n=5):
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def svg_line_chart(series, labels=None, title="", width=800, height=400, x_label="day", y_label="inflow"):
    """One polyline per series; ``series`` items are value arrays or (x_offset, values) pairs.

    Output bytes depend only on the inputs.
    """
    items = []
    for s in series:
        off, vals = s if isinstance(s, tuple) else (0, s)
        vals = np.asarray(vals, dtype=np.float64).ravel()
        if vals.size:
            items.append((int(off), vals))
    if not items:
        raise ValueError("nothing to plot: need at least one non-empty series")
    labels = list(labels) if labels is not None else [f"series {i + 1}" for i in range(len(items))]
    if len(labels) < len(items):
        labels += [f"series {i + 1}" for i in range(len(labels), len(items))]

    x_max = max(off + v.size - 1 for off, v in items)
    x_min = min(off for off, _ in items)
    finite = np.concatenate([v[np.isfinite(v)] for _, v in items])
    y_min, y_max = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if y_max == y_min:
        y_min, y_max = y_min - 0.5, y_max + 0.5
    if x_max == x_min:
        x_max = x_min + 1

    ml, mr, mt, mb = 70, 150, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    def px(x):
        return ml + (x - x_min) / (x_max - x_min) * pw

    def py(y):
        return mt + ph - (y - y_min) / (y_max - y_min) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="16">{escape(title)}</text>')
    # axes
    out.append(f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>')
    out.append(f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>')
    for t in _ticks(x_min, x_max):
        x = px(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{mt + ph}" x2="{_fmt(x)}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(x)}" y="{mt + ph + 18}" text-anchor="middle" font-size="11">{t:.0f}</text>')
    for t in _ticks(y_min, y_max):
        y = py(t)
        out.append(f'<line x1="{ml - 5}" y1="{_fmt(y)}" x2="{ml}" y2="{_fmt(y)}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{_fmt(y + 4)}" text-anchor="end" font-size="11">{t:.4g}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" font-size="12">{escape(x_label)}</text>')
    out.append(
        f'<text x="15" y="{mt + ph / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {mt + ph / 2:.1f})">{escape(y_label)}</text>'
    )
    for n, ((off, vals), label) in enumerate(zip(items, labels)):
        color = PALETTE[n % len(PALETTE)]
        pts = " ".join(f"{_fmt(px(off + i))},{_fmt(py(v))}" for i, v in enumerate(vals) if np.isfinite(v))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>')
        ly = mt + 10 + 18 * n
        out.append(f'<line x1="{ml + pw + 10}" y1="{ly}" x2="{ml + pw + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ml + pw + 35}" y="{ly + 4}" font-size="11">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(series, labels, path, **kwargs):
    svg = svg_line_chart(series, labels, **kwargs)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(svg)
    return svg
