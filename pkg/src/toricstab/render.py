"""Deterministic SVG pictures of planar fans."""
from __future__ import annotations

import math

from .fan import Fan, irregular_cones

SIZE = 400
RADIUS = 160
_FILL = "#cfe0f5"
_IRREGULAR = "#f4b6a6"
_RAY = "#1b3a5c"
_EIGEN = "#2e8b57"


def _xy(v, r=RADIUS):
    n = math.hypot(v[0], v[1])
    c = SIZE / 2
    return c + r * v[0] / n, c - r * v[1] / n


def _fmt(x):
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _pt(p):
    return f"{_fmt(p[0])},{_fmt(p[1])}"


def real_eigenlines(matrix):
    """Unit directions of the real eigenlines of a 2x2 matrix (none for scalars)."""
    (a, b), (c, d) = matrix
    if b == 0 and c == 0 and a == d:
        return []
    disc = (a - d) ** 2 + 4 * b * c
    if disc < 0:
        return []
    out = []
    roots = sorted({(a + d + s * math.sqrt(disc)) / 2 for s in (1, -1)}, reverse=True)
    for lam in roots:
        v = (b, lam - a) if abs(b) + abs(lam - a) > 1e-12 else (lam - d, c)
        n = math.hypot(*v)
        out.append((v[0] / n, v[1] / n))
    return out


def render_svg(f: Fan, eigen_matrix=None, highlight=None) -> str:
    """SVG text for a rank-2 fan.  Irregular cones are tinted unless highlight is given."""
    if f.rank != 2:
        raise ValueError("render supports rank 2 only")
    marked = set(highlight) if highlight is not None else set(irregular_cones(f))
    c = SIZE / 2
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
             f'viewBox="0 0 {SIZE} {SIZE}">',
             f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
             '<defs><marker id="head" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" '
             f'markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{_RAY}"/>'
             '</marker></defs>']
    for key in f.maximal:
        if len(key) != 2:
            continue
        u, w = f.rays[key[0]], f.rays[key[1]]
        if u[0] * w[1] - u[1] * w[0] < 0:
            u, w = w, u
        colour = _IRREGULAR if key in marked else _FILL
        # math-ccw is screen-ccw after the y flip, hence sweep flag 0
        parts.append(f'<path class="cone{" irregular" if key in marked else ""}" '
                     f'd="M{_pt((c, c))} L{_pt(_xy(u))} A{RADIUS},{RADIUS} 0 0 0 {_pt(_xy(w))} Z" '
                     f'fill="{colour}" stroke="none"/>')
    for r in f.rays:
        parts.append(f'<line class="ray" x1="{_fmt(c)}" y1="{_fmt(c)}" x2="{_fmt(_xy(r)[0])}" '
                     f'y2="{_fmt(_xy(r)[1])}" stroke="{_RAY}" stroke-width="2" '
                     'marker-end="url(#head)"/>')
        lx, ly = _xy(r, RADIUS + 18)
        parts.append(f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="11" text-anchor="middle" '
                     f'dominant-baseline="middle">({r[0]},{r[1]})</text>')
    if eigen_matrix is not None:
        for v in real_eigenlines(eigen_matrix):
            a, b = _xy(v, RADIUS + 30), _xy((-v[0], -v[1]), RADIUS + 30)
            parts.append(f'<line class="eigenline" x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" '
                         f'x2="{_fmt(b[0])}" y2="{_fmt(b[1])}" stroke="{_EIGEN}" '
                         'stroke-width="1.5" stroke-dasharray="6,4"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
