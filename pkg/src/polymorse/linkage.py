"""Linkages, polygons and the two area functionals.

Indices are 1-based modulo n in the public vocabulary (edge i joins p_i and
p_{i+1}, edge n closes the polygon); arrays are 0-based internally.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidLinkage

TAU_LEN = 1e-9  # relative, edge lengths and |xi|
TAU_NUM = 1e-10
TAU_GEN_REL = 1e-9  # multiplied by the perimeter


def subset_sums(lengths):
    """All 2**n subset sums, indexed by bitmask (bit i <-> lengths[i]),
    together with the subset sizes."""
    sums = np.zeros(1)
    sizes = np.zeros(1, dtype=np.int64)
    for l in lengths:
        sums = np.concatenate([sums, sums + l])
        sizes = np.concatenate([sizes, sizes + 1])
    return sums, sizes


def mask_to_subset(mask, n):
    return tuple(i + 1 for i in range(n) if mask >> i & 1)


@dataclass(frozen=True)
class Linkage:
    lengths: tuple

    def __post_init__(self):
        ls = tuple(float(x) for x in self.lengths)
        if len(ls) < 3:
            raise InvalidLinkage(f"need at least 3 bars, got {len(ls)}")
        if any(not np.isfinite(x) or x <= 0 for x in ls):
            raise InvalidLinkage(f"bar lengths must be positive: {ls}")
        object.__setattr__(self, "lengths", ls)

    @classmethod
    def parse(cls, text):
        return cls(tuple(float(t) for t in str(text).split(",") if t.strip()))

    @property
    def n(self):
        return len(self.lengths)

    @property
    def array(self):
        return np.array(self.lengths)

    @property
    def perimeter(self):
        return float(sum(self.lengths))

    @property
    def tau_gen(self):
        return TAU_GEN_REL * self.perimeter

    @property
    def nonempty(self):
        """True iff every bar is shorter than the sum of the others."""
        l = self.perimeter
        return all(x < l - x for x in self.lengths)

    @property
    def generic(self):
        return is_generic(self)[0]

    def __str__(self):
        return ",".join(f"{x:g}" for x in self.lengths)


def is_generic(L: Linkage):
    """Return ``(generic, witness)``; the witness is the first (by bitmask)
    1-based subset I with l_I = l/2 within tolerance, or ``None``."""
    sums, _ = subset_sums(L.lengths)
    bad = np.nonzero(np.abs(sums - L.perimeter / 2) <= L.tau_gen)[0]
    if bad.size:
        return False, mask_to_subset(int(bad[0]), L.n)
    return True, None


def _as_array(P):
    return np.asarray(P.vertices if hasattr(P, "vertices") else P, dtype=float)


def _edge_lengths(V):
    return np.linalg.norm(np.roll(V, -1, axis=0) - V, axis=1)


class _Polygon:
    dim = 0

    def __init__(self, vertices):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != self.dim or V.shape[0] < 3:
            raise ValueError(
                f"{type(self).__name__} needs an (n>=3, {self.dim}) vertex array, got {V.shape}"
            )
        V.setflags(write=False)
        self.vertices = V

    @property
    def n(self):
        return self.vertices.shape[0]

    def edge_lengths(self):
        return _edge_lengths(self.vertices)

    def matches(self, L: Linkage, tol=TAU_LEN):
        if L.n != self.n:
            return False
        ref = L.array
        return bool(np.all(np.abs(self.edge_lengths() - ref) <= tol * ref))

    def diameter(self):
        V = self.vertices
        return float(np.max(np.linalg.norm(V[:, None, :] - V[None, :, :], axis=2)))

    def linkage(self):
        return Linkage(tuple(self.edge_lengths()))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class PlanarPolygon(_Polygon):
    dim = 2

    def canonical(self):
        """Gauge p_1 = 0, p_2 on the positive first axis."""
        V = self.vertices - self.vertices[0]
        a = np.arctan2(V[1, 1], V[1, 0])
        c, s = np.cos(-a), np.sin(-a)
        R = np.array([[c, -s], [s, c]])
        W = V @ R.T
        W[0] = 0.0
        W[1, 1] = 0.0
        return PlanarPolygon(W)

    def to_spatial(self):
        return SpatialPolygon(np.column_stack([self.vertices, np.zeros(self.n)]))


class SpatialPolygon(_Polygon):
    dim = 3


def rotation_to_z(xi):
    """A rotation matrix R with R @ xi = e_z for unit xi."""
    xi = np.asarray(xi, dtype=float)
    z = np.array([0.0, 0.0, 1.0])
    v = np.cross(xi, z)
    c = float(xi @ z)
    s = np.linalg.norm(v)
    if s < 1e-15:
        if c > 0:
            return np.eye(3)
        return np.diag([1.0, -1.0, -1.0])
    k = v / s
    Kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + s * Kx + (1 - c) * Kx @ Kx


@dataclass(frozen=True, eq=False)
class DecoratedConfig:
    """A spatial polygon together with a unit direction xi."""

    polygon: SpatialPolygon
    xi: np.ndarray
    gauge_vertex: int = field(default=-1, compare=False)

    def __post_init__(self):
        xi = np.array(self.xi, dtype=float)
        if abs(np.linalg.norm(xi) - 1.0) > TAU_LEN:
            raise ValueError(f"xi must be a unit vector, |xi| = {np.linalg.norm(xi)}")
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)
        if not isinstance(self.polygon, SpatialPolygon):
            object.__setattr__(self, "polygon", SpatialPolygon(self.polygon))

    @property
    def n(self):
        return self.polygon.n

    @property
    def vertices(self):
        return self.polygon.vertices

    def canonical(self, gauge_tol=1e-8, best_gauge=False):
        """Gauge xi = e_z, p_1 = 0 and the gauge vertex on the half-plane
        y = 0, x > 0.

        The gauge vertex is p_2, falling back to the next vertex off the xi
        axis; with ``best_gauge`` it is the vertex farthest from the axis,
        which keeps the chart well conditioned for numerical work.
        """
        R = rotation_to_z(self.xi)
        V = (self.vertices - self.vertices[0]) @ R.T
        scale = max(self.polygon.diameter(), 1e-300)
        rad = np.hypot(V[:, 0], V[:, 1])
        rad[0] = 0.0
        if best_gauge:
            k = int(np.argmax(rad)) if rad.max() > gauge_tol * scale else None
        else:
            k = next((j for j in range(1, self.n) if rad[j] > gauge_tol * scale), None)
        if k is None:
            # every vertex on the xi axis: the residual rotation is unbroken
            k = 1
        else:
            a = np.arctan2(V[k, 1], V[k, 0])
            c, s = np.cos(-a), np.sin(-a)
            Rz = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
            V = V @ Rz.T
            V[k, 1] = 0.0
        V[0] = 0.0
        return DecoratedConfig(SpatialPolygon(V), np.array([0.0, 0.0, 1.0]), gauge_vertex=k)

    def congruence_residual(self, other):
        """Max vertex distance between (P, xi) and (Q, eta) after the best
        orientation-preserving isometry taking xi to eta (rigid motions of
        the pair; labels must match)."""
        A = self.canonical().vertices
        B = other.canonical().vertices
        if A.shape != B.shape:
            return np.inf
        u = A[:, 0] + 1j * A[:, 1]
        v = B[:, 0] + 1j * B[:, 1]
        w = np.vdot(u, v)
        rot = w / abs(w) if abs(w) > 0 else 1.0
        dxy = np.abs(rot * u - v)
        return float(max(np.max(dxy), np.max(np.abs(A[:, 2] - B[:, 2]))))

    def flipped(self):
        """(P, -xi)."""
        return DecoratedConfig(self.polygon, -self.xi)

    def mirrored(self):
        """Mirror image in the plane orthogonal to e_z (xi reflected too)."""
        M = np.diag([1.0, 1.0, -1.0])
        return DecoratedConfig(SpatialPolygon(self.vertices @ M), M @ self.xi)


def signed_area(P) -> float:
    V = _as_array(P)
    x, y = V[:, 0], V[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def vector_area(P) -> np.ndarray:
    V = _as_array(P)
    return 0.5 * np.sum(np.cross(V, np.roll(V, -1, axis=0)), axis=0)


def s_value(C: DecoratedConfig) -> float:
    """S(P, xi) as the scalar product of the vector area with xi."""
    return float(vector_area(C.polygon) @ C.xi)


def projection_basis(xi):
    """Orthonormal (u, v) spanning xi^perp with (u, v, xi) right-handed."""
    xi = np.asarray(xi, dtype=float)
    a = np.eye(3)[int(np.argmin(np.abs(xi)))]
    u = a - (a @ xi) * xi
    u /= np.linalg.norm(u)
    v = np.cross(xi, u)
    return u, v


def s_value_projected(C: DecoratedConfig) -> float:
    """S(P, xi) as the signed area of the projection onto xi^perp."""
    u, v = projection_basis(C.xi)
    V = C.vertices
    return signed_area(np.column_stack([V @ u, V @ v]))


def align(P, Q) -> float:
    """RMS vertex distance after the best orientation-preserving rigid
    motion of P onto Q (Kabsch with det +1)."""
    A = _as_array(P)
    B = _as_array(Q)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    Ac = A - A.mean(axis=0)
    Bc = B - B.mean(axis=0)
    H = Ac.T @ Bc
    U, _, Vt = np.linalg.svd(H)
    D = np.eye(A.shape[1])
    D[-1, -1] = np.sign(np.linalg.det(Vt.T @ U.T)) or 1.0
    R = Vt.T @ D @ U.T
    diff = Ac @ R.T - Bc
    return float(np.sqrt(np.mean(np.sum(diff * diff, axis=1))))


# -- JSON ---------------------------------------------------------------------

def polygon_to_dict(P, lengths=None):
    if isinstance(P, DecoratedConfig):
        V, xi = P.vertices, P.xi
    else:
        V, xi = _as_array(P), None
    if lengths is None:
        lengths = _edge_lengths(V)
    d = {
        "n": int(V.shape[0]),
        "vertices": [[float(c) for c in row] for row in V],
        "lengths": [float(x) for x in lengths],
    }
    if xi is not None:
        d["xi"] = [float(c) for c in xi]
    return d


def polygon_from_dict(d):
    V = np.array(d["vertices"], dtype=float)
    if "n" in d and int(d["n"]) != V.shape[0]:
        raise ValueError(f"n={d['n']} but {V.shape[0]} vertices given")
    if d.get("xi") is not None:
        if V.shape[1] == 2:
            V = np.column_stack([V, np.zeros(V.shape[0])])
        return DecoratedConfig(SpatialPolygon(V), np.array(d["xi"], dtype=float))
    if V.shape[1] == 2:
        return PlanarPolygon(V)
    return SpatialPolygon(V)


def load_polygon(path):
    with open(path) as fh:
        return polygon_from_dict(json.load(fh))


def save_polygon(P, path, lengths=None):
    with open(path, "w") as fh:
        json.dump(polygon_to_dict(P, lengths), fh, indent=2)
        fh.write("\n")
