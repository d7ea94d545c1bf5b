"""Minimal SVG writers: mesh wireframe, flat-shaded nodal heatmap, line plots."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .mesh import TriMesh

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
# viridis anchors, interpolated linearly
_VIRIDIS = np.array(
    [
        [68, 1, 84],
        [59, 82, 139],
        [33, 145, 140],
        [94, 201, 98],
        [253, 231, 37],
    ],
    dtype=float,
)


def _colour(v: float) -> str:
    v = min(max(v, 0.0), 1.0) * (len(_VIRIDIS) - 1)
    i = min(int(v), len(_VIRIDIS) - 2)
    c = _VIRIDIS[i] + (v - i) * (_VIRIDIS[i + 1] - _VIRIDIS[i])
    return "#%02x%02x%02x" % tuple(int(round(x)) for x in c)


def _frame(mesh: TriMesh, size: int):
    lo = mesh.vertices.min(axis=0)
    hi = mesh.vertices.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    scale = (size - 20) / span

    def xy(p):
        return 10 + (p[0] - lo[0]) * scale, size - 10 - (p[1] - lo[1]) * scale

    return xy


def _header(w: int, h: int) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]


def mesh_svg(mesh: TriMesh, size: int = 800) -> str:
    """Wireframe with constrained segments drawn thicker."""
    xy = _frame(mesh, size)
    out = _header(size, size)
    out.append('<g fill="none" stroke="#444" stroke-width="0.4">')
    for a, b, c in mesh.triangles:
        pts = " ".join("%.2f,%.2f" % xy(mesh.vertices[k]) for k in (a, b, c))
        out.append(f'<polygon points="{pts}"/>')
    out.append("</g>")
    out.append('<g stroke="#d62728" stroke-width="1.2">')
    for u, v in mesh.segments:
        (x1, y1), (x2, y2) = xy(mesh.vertices[u]), xy(mesh.vertices[v])
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}"/>')
    out.append("</g></svg>")
    return "\n".join(out) + "\n"


def heatmap_svg(mesh: TriMesh, values: np.ndarray, size: int = 800) -> str:
    """Triangles filled with the colour of their mean nodal value."""
    values = np.asarray(values, dtype=float)
    if values.shape != (mesh.n_vertices,):
        raise ValueError("one value per vertex expected")
    xy = _frame(mesh, size)
    lo, hi = float(values.min()), float(values.max())
    span = (hi - lo) or 1.0
    tv = values[mesh.triangles].mean(axis=1)
    out = _header(size, size)
    for (a, b, c), v in zip(mesh.triangles, tv):
        col = _colour((v - lo) / span)
        pts = " ".join("%.2f,%.2f" % xy(mesh.vertices[k]) for k in (a, b, c))
        out.append(f'<polygon points="{pts}" fill="{col}" stroke="{col}" stroke-width="0.3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    return [start + k * step for k in range(int((hi - start) / step + 1e-9) + 1)]


def line_plot(
    series: dict[str, tuple[list[float], list[float]]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 640,
    height: int = 420,
) -> str:
    """Line plot with markers; ``series`` maps a legend label to (x, y) lists."""
    xs = [x for xv, _ in series.values() for x in xv]
    ys = [y for _, yv in series.values() for y in yv]
    if not xs:
        raise ValueError("empty plot")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - abs(y0) * 0.1 - 1e-12, y1 + abs(y1) * 0.1 + 1e-12
    pad = 0.06 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    L, R, T, B = 80, 20, 40, 50
    pw, ph = width - L - R, height - T - B

    def px(x):
        return L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return T + (y1 - y) / (y1 - y0) * ph

    out = _header(width, height)
    out.append(f'<text x="{width / 2}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>')
    out.append(f'<rect x="{L}" y="{T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for t in _ticks(x0, x1):
        out.append(f'<text x="{px(t):.1f}" y="{T + ph + 16}" text-anchor="middle" font-size="11">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{L}" x2="{L + pw}" y1="{py(t):.1f}" y2="{py(t):.1f}" stroke="#ddd"/>')
        out.append(f'<text x="{L - 6}" y="{py(t) + 4:.1f}" text-anchor="end" font-size="11">{t:.6g}</text>')
    out.append(f'<text x="{L + pw / 2}" y="{height - 12}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{T + ph / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {T + ph / 2})">{escape(ylabel)}</text>'
    )
    for k, (label, (xv, yv)) in enumerate(series.items()):
        col = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xv, yv))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{col}" stroke-width="1.6"/>')
        for x, y in zip(xv, yv):
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="{col}"/>')
        ly = T + 16 + 16 * k
        out.append(f'<line x1="{L + 10}" x2="{L + 30}" y1="{ly}" y2="{ly}" stroke="{col}" stroke-width="2"/>')
        out.append(f'<text x="{L + 36}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
