"""Static SVG drawings of planar and decorated configurations.

Output is plain text built with fixed-precision formatting, so the same
input always produces the same bytes.
"""
from __future__ import annotations

import numpy as np

from .cyclic import CyclicConfig, edge_orientations, winding_number
from .linkage import DecoratedConfig, projection_basis, s_value

SIZE = 360
PAD = 30


def _f(x):
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _frame(points, extra_radius=0.0):
    P = np.asarray(points, dtype=float)
    lo = P.min(axis=0) - extra_radius
    hi = P.max(axis=0) + extra_radius
    span = max(float(np.max(hi - lo)), 1e-12)
    scale = (SIZE - 2 * PAD) / span
    mid = 0.5 * (lo + hi)

    def to_px(q):
        q = np.asarray(q, dtype=float)
        x = SIZE / 2 + (q[..., 0] - mid[0]) * scale
        y = SIZE / 2 - (q[..., 1] - mid[1]) * scale  # y up
        return np.stack([x, y], axis=-1)

    return to_px, scale


def _arrows(px, ox, colour="#1f3a93"):
    out = []
    n = len(px)
    for i in range(n):
        a, b = px[i], px[(i + 1) % n]
        out.append(
            f'<line x1="{_f(a[0] + ox)}" y1="{_f(a[1])}" x2="{_f(b[0] + ox)}" y2="{_f(b[1])}" '
            f'stroke="{colour}" stroke-width="1.6" marker-end="url(#arrow)"/>'
        )
    for i, p in enumerate(px):
        out.append(f'<circle cx="{_f(p[0] + ox)}" cy="{_f(p[1])}" r="3" fill="#000"/>')
        out.append(f'<text x="{_f(p[0] + ox + 5)}" y="{_f(p[1] - 5)}" font-size="11">p{i + 1}</text>')
    return out


def _document(width, body, notes):
    height = SIZE + 18 * len(notes) + 10
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="7" '
        'markerHeight="7" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="#1f3a93"/>'
        "</marker></defs>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#fff"/>',
    ]
    text = [
        f'<text x="10" y="{SIZE + 18 * (k + 1)}" font-size="12">{line}</text>'
        for k, line in enumerate(notes)
    ]
    return "\n".join(head + body + text + ["</svg>", ""])


def svg_cyclic(C: CyclicConfig, index=None) -> str:
    V = C.vertices.vertices
    to_px, scale = _frame(np.zeros((1, 2)), extra_radius=C.r)
    px = to_px(V)
    c = to_px(np.zeros(2))
    body = [
        f'<circle cx="{_f(c[0])}" cy="{_f(c[1])}" r="{_f(C.r * scale)}" fill="none" '
        'stroke="#999" stroke-dasharray="4 3"/>',
        f'<circle cx="{_f(c[0])}" cy="{_f(c[1])}" r="2" fill="#999"/>',
    ]
    body += _arrows(px, 0.0)
    eps = edge_orientations(V)
    for i in range(C.n):
        m = 0.5 * (px[i] + px[(i + 1) % C.n])
        body.append(
            f'<text x="{_f(m[0])}" y="{_f(m[1] + 12)}" font-size="10" fill="#a33">'
            f'{"+" if eps[i] > 0 else "-"}</text>'
        )
    sig = "".join("+" if s > 0 else "-" for s in C.E)
    notes = [
        f"E={sig} e={C.e} omega={winding_number(V)}",
        f"r={C.r:.6f} delta={C.delta:.6f} A={C.area:.6f}",
    ]
    if index is not None:
        notes.append(f"mu={index}")
    return _document(SIZE, body, notes)


def svg_decorated(C: DecoratedConfig, index=None, label=None) -> str:
    V = C.vertices - C.vertices.mean(axis=0)
    u, v = projection_basis(C.xi)
    Q = np.column_stack([V @ u, V @ v])
    # elevation axis: principal direction of the projection, so zig-zags
    # show their two guide lines
    w, vecs = np.linalg.eigh(Q.T @ Q)
    d = vecs[:, -1]
    if d[np.argmax(np.abs(d))] < 0:
        d = -d
    horiz = Q @ d
    side = np.column_stack([horiz, V @ C.xi])

    to_a, _ = _frame(Q)
    to_b, _ = _frame(side)
    body = [f'<line x1="{SIZE}" y1="0" x2="{SIZE}" y2="{SIZE}" stroke="#ccc"/>',
            '<text x="8" y="14" font-size="11">along xi</text>',
            f'<text x="{SIZE + 8}" y="14" font-size="11">elevation (xi up)</text>']
    body += _arrows(to_a(Q), 0.0)
    diam = float(np.max(np.linalg.norm(V[:, None] - V[None], axis=2)))
    spread = np.ptp(Q @ np.array([-d[1], d[0]])) if len(Q) else 0.0
    levels = np.unique(np.round(horiz / max(diam, 1e-300), 6))
    if spread <= 1e-6 * diam and levels.size == 2:
        for x in levels * diam:
            a = to_b(np.array([x, side[:, 1].min()]))
            b = to_b(np.array([x, side[:, 1].max()]))
            body.append(
                f'<line x1="{_f(a[0] + SIZE)}" y1="{_f(a[1])}" x2="{_f(b[0] + SIZE)}" y2="{_f(b[1])}" '
                'stroke="#2a2" stroke-dasharray="5 3"/>'
            )
    body += _arrows(to_b(side), float(SIZE))
    notes = [f"xi=({C.xi[0]:.4f}, {C.xi[1]:.4f}, {C.xi[2]:.4f}) S={s_value(C):.6f}"]
    if label:
        notes.append(str(label))
    if index is not None:
        notes.append(f"mu={index}")
    return _document(2 * SIZE, body, notes)


def render_svg(C, path, index=None, label=None):
    """Write ``C`` as SVG to ``path``; returns the path."""
    if isinstance(C, CyclicConfig):
        text = svg_cyclic(C, index)
    elif isinstance(C, DecoratedConfig):
        text = svg_decorated(C, index, label)
    else:
        raise TypeError(f"cannot render {type(C).__name__}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path
