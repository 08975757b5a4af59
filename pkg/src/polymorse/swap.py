"""Edge-transposition maps s_i and the composite SW map.

s_i moves p_i to its mirror image across the perpendicular bisector of the
short diagonal p_{i-1} p_{i+1}. The mirror keeps p_i inside the plane
spanned by the two adjacent edges, swaps their lengths, and keeps the
signed area of the triangle p_{i-1} p_i p_{i+1}, so A and S are preserved.
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateSwap, IndexOutOfRange
from .linkage import TAU_LEN, align

_CROSS_TOL = 1e-6  # w below this is dominated by cancellation error


def _householder(a, p, b):
    d = b - a
    u = d / np.linalg.norm(d)
    m = 0.5 * (a + b)
    return p - 2.0 * ((p - m) @ u) * u


def _in_plane(a, p, b):
    """Same reflection written in the (u, w) frame of the spanned plane:
    keep the component along the bisector direction w, negate the one along
    the diagonal u. ``None`` when the two edges are collinear."""
    d = b - a
    u = d / np.linalg.norm(d)
    m = 0.5 * (a + b)
    q = p - m
    w = q - (q @ u) * u
    nw = np.linalg.norm(w)
    if nw <= _CROSS_TOL * np.linalg.norm(d):
        return None
    w /= nw
    return m + (q @ w) * w - (q @ u) * u


def circumcenter(V, rtol=1e-9):
    """Center of the circle through all vertices, or ``None`` if the polygon
    is not inscribed (to ``rtol`` of its size)."""
    V = np.asarray(V, dtype=float)
    c0 = V.mean(axis=0)
    W = V - c0
    _, sv, Vt = np.linalg.svd(W)
    B = Vt[:2]
    size = max(sv[0], 1e-300)
    if V.shape[1] == 3 and sv[-1] > rtol * size:
        return None
    Q = W @ B.T
    A = np.column_stack([2 * Q, np.ones(len(Q))])
    sol, *_ = np.linalg.lstsq(A, np.sum(Q * Q, axis=1), rcond=None)
    c = sol[:2]
    rad = np.linalg.norm(Q - c, axis=1)
    if np.ptp(rad) > rtol * max(np.max(np.abs(Q)), 1e-300):
        return None
    return c0 + c @ B


def _about_center(a, p, b, c):
    """Reflection across the perpendicular bisector of the chord ab of a
    circle centred at c, via the angle bisector of a and b seen from c.
    Well conditioned for short chords and defined for a = b."""
    ua = (a - c) / np.linalg.norm(a - c)
    ub = (b - c) / np.linalg.norm(b - c)
    s, d = ua + ub, ua - ub
    q = p - c
    if np.linalg.norm(s) >= np.linalg.norm(d):
        u = s / np.linalg.norm(s)
        return c + 2.0 * (q @ u) * u - q
    u = d / np.linalg.norm(d)
    return c + q - 2.0 * (q @ u) * u


def _swap_array(V, i, strict=True, center=None):
    n = V.shape[0]
    a, p, b = V[(i - 2) % n], V[i - 1], V[i % n]
    scale = max(np.linalg.norm(p - a), np.linalg.norm(b - p), 1e-300)
    folded = np.linalg.norm(b - a) <= TAU_LEN * scale
    if folded and (strict or center is None):
        raise DegenerateSwap(f"short diagonal at vertex {i} vanishes", index=i)
    if center is not None:
        q = _about_center(a, p, b, center)
    else:
        q = _householder(a, p, b)
        alt = _in_plane(a, p, b)
        if alt is not None:
            assert np.allclose(q, alt, atol=1e-9 * scale, rtol=0), "reflection forms disagree"
    W = V.copy()
    W[i - 1] = q
    return W


def swap_vertex(P, i: int, strict=True):
    """s_i(P) for 1-based vertex index i; returns the same polygon type.

    The result is a configuration of the linkage with l_{i-1} and l_i
    transposed. A vanishing short diagonal raises DegenerateSwap unless
    ``strict`` is off and the polygon is inscribed in a circle.
    """
    V = np.asarray(P.vertices, dtype=float)
    n = V.shape[0]
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"vertex index {i} outside 1..{n}")
    W = _swap_array(V, i, strict, circumcenter(V))
    old = np.linalg.norm(np.roll(V, -1, axis=0) - V, axis=1)
    new = np.linalg.norm(np.roll(W, -1, axis=0) - W, axis=1)
    expect = old.copy()
    expect[[(i - 2) % n, i - 1]] = old[[i - 1, (i - 2) % n]]
    assert np.allclose(new, expect, atol=1e-9 * max(old.max(), 1e-300), rtol=0)
    return type(P)(W)


def sw(P, strict=False):
    """SW(P) = s_{n-1} o ... o s_1 (P), relabelled by a shift of one so the
    result is again a configuration of the original linkage. Folded vertices
    (vanishing short diagonal) of an inscribed polygon are reflected across
    the radius through p_{i-1}; ``strict`` makes them an error instead."""
    V = np.asarray(P.vertices, dtype=float)
    n = V.shape[0]
    W = V.copy()
    c = circumcenter(V)
    for i in range(1, n):
        W = _swap_array(W, i, strict, c)
    W = np.roll(W, 1, axis=0)
    out = type(P)(W)
    ref = np.linalg.norm(np.roll(V, -1, axis=0) - V, axis=1)
    assert np.allclose(out.edge_lengths(), ref, atol=1e-8 * ref.max(), rtol=0)
    return out


def sw_inverse(P, strict=False):
    """Inverse of :func:`sw`: undo the shift, then apply s_1 ... s_{n-1} in
    reverse order (each s_i is an involution)."""
    V = np.roll(np.asarray(P.vertices, dtype=float), -1, axis=0)
    c = circumcenter(V)
    for i in range(V.shape[0] - 1, 0, -1):
        V = _swap_array(V, i, strict, c)
    return type(P)(V)


def sw_residual(P) -> float:
    return align(sw(P), P)


def is_sw_invariant(P, tol=None) -> bool:
    """True iff SW(P) equals P up to an orientation-preserving isometry.

    ``tol`` is absolute; the default is 1e-7 times the polygon diameter.
    """
    if tol is None:
        tol = 1e-7 * P.diameter()
    return sw_residual(P) < tol

