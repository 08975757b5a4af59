"""Cyclic configurations: the critical points of the signed area.

A cyclic configuration is determined by its circumradius r, the edge
orientation string E (eps_i = +1 when the circumcenter lies to the left of
the directed edge p_i p_{i+1}) and the winding number omega. With the half
central angles alpha_i = arcsin(l_i / 2r), closure reads
sum(eps_i * alpha_i) = pi * omega, and vertex i+1 is vertex i rotated about
the center by 2 * eps_i * alpha_i.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from math import comb

import numpy as np

from . import kernels
from .errors import DegenerateDelta, GenericityError, NonGenericCentral, OddOnly
from .linkage import (
    TAU_LEN,
    TAU_NUM,
    DecoratedConfig,
    Linkage,
    PlanarPolygon,
    SpatialPolygon,
    signed_area,
)

DEFAULT_SAMPLES = 4096
R_MAX_FACTOR = 1e3


def _vertices_from_angles(r, thetas):
    # edge 1 is horizontal and symmetric about the vertical axis
    phi = np.empty(len(thetas))
    phi[0] = -0.5 * np.pi - thetas[0]
    phi[1:] = phi[0] + 2.0 * np.cumsum(thetas[:-1])
    return r * np.column_stack([np.cos(phi), np.sin(phi)])


def winding_number(V, center=(0.0, 0.0)) -> int:
    """Winding number of the closed polygon V around ``center``."""
    W = np.asarray(V, dtype=float)[:, :2] - np.asarray(center, dtype=float)
    nxt = np.roll(W, -1, axis=0)
    cross = W[:, 0] * nxt[:, 1] - W[:, 1] * nxt[:, 0]
    dot = np.einsum("ij,ij->i", W, nxt)
    return int(round(np.sum(np.arctan2(cross, dot)) / (2 * np.pi)))


def edge_orientations(V, center=(0.0, 0.0)):
    """eps_i = +1 if ``center`` is to the left of p_i -> p_{i+1}."""
    W = np.asarray(V, dtype=float)[:, :2]
    c = np.asarray(center, dtype=float)
    E = np.roll(W, -1, axis=0) - W
    Q = c - W
    side = E[:, 0] * Q[:, 1] - E[:, 1] * Q[:, 0]
    return tuple(int(s) for s in np.where(side > 0, 1, -1))


@dataclass(frozen=True, eq=False)
class CyclicConfig:
    linkage: Linkage
    r: float
    E: tuple
    omega: int
    alphas: np.ndarray
    vertices: PlanarPolygon
    mirror_index: int | None = field(default=None, compare=False)

    @classmethod
    def build(cls, L: Linkage, r: float, E, omega: int):
        E = tuple(int(s) for s in E)
        alphas = np.arcsin(np.clip(L.array / (2.0 * r), -1.0, 1.0))
        alphas.setflags(write=False)
        thetas = np.array(E) * alphas
        return cls(L, float(r), E, int(omega), alphas, PlanarPolygon(_vertices_from_angles(r, thetas)))

    @classmethod
    def from_half_angles(cls, thetas, r=1.0, tol=TAU_NUM):
        """Configuration with signed half-angles eps_i * alpha_i = thetas[i]."""
        th = np.asarray(thetas, dtype=float)
        if np.any(th == 0) or np.any(np.abs(th) >= np.pi / 2):
            raise ValueError("signed half-angles must lie in (-pi/2, 0) U (0, pi/2)")
        w = th.sum() / np.pi
        omega = int(round(w))
        if abs(w - omega) * np.pi > tol:
            raise ValueError(f"half-angles do not close: sum = {th.sum()} is not a multiple of pi")
        L = Linkage(tuple(2.0 * r * np.sin(np.abs(th))))
        return cls.build(L, r, np.sign(th).astype(int), omega)

    @property
    def n(self):
        return self.linkage.n

    @property
    def e(self):
        return sum(1 for s in self.E if s > 0)

    @property
    def thetas(self):
        return np.array(self.E) * self.alphas

    @property
    def delta(self):
        return float(np.sum(np.array(self.E) * np.tan(self.alphas)))

    @property
    def area(self):
        return signed_area(self.vertices)

    def mirror(self):
        """The mirror image: orientations and winding number negate."""
        return CyclicConfig.build(self.linkage, self.r, tuple(-s for s in self.E), -self.omega)

    def to_decorated(self, xi_sign=1):
        """(P, +-e_z) with P in the plane z = 0."""
        V = np.column_stack([self.vertices.vertices, np.zeros(self.n)])
        return DecoratedConfig(SpatialPolygon(V), np.array([0.0, 0.0, float(xi_sign)]))

    def check(self, tol=TAU_NUM):
        """Assert every structural invariant; returns self for chaining."""
        L = self.linkage.array
        assert np.allclose(np.sin(self.alphas), L / (2 * self.r), atol=tol, rtol=0)
        assert abs(np.sum(self.thetas) - np.pi * self.omega) <= tol * max(1, self.n)
        assert self.r > L.max() / 2
        assert self.vertices.matches(self.linkage, tol=max(TAU_LEN, tol))
        assert winding_number(self.vertices.vertices) == self.omega
        assert edge_orientations(self.vertices.vertices) == self.E
        return self

    def to_dict(self):
        return {
            "lengths": list(self.linkage.lengths),
            "r": self.r,
            "E": list(self.E),
            "omega": self.omega,
            "alphas": [float(a) for a in self.alphas],
            "e": self.e,
            "delta": self.delta,
            "area": self.area,
            "vertices": [[float(x), float(y)] for x, y in self.vertices.vertices],
        }

    @classmethod
    def from_dict(cls, d):
        L = Linkage(tuple(d["lengths"]))
        return cls.build(L, float(d["r"]), d["E"], int(d["omega"]))

    def __repr__(self):
        sig = "".join("+" if s > 0 else "-" for s in self.E)
        return f"CyclicConfig(E={sig}, omega={self.omega}, r={self.r:.6g})"


def delta(C: CyclicConfig) -> float:
    """sum(eps_i * tan(alpha_i)); its sign picks the planar index branch."""
    d = C.delta
    if abs(d) < TAU_NUM:
        raise DegenerateDelta(f"delta = {d:.3g} vanishes at {C!r}")
    return d


def radius_grid(L: Linkage, samples=DEFAULT_SAMPLES):
    """Log-spaced offsets above r_min = max(l)/2 out to 1e3 * perimeter.

    The offsets start at 1e-14 * r_min so that near-central roots, where
    arcsin has unbounded slope, still get bracketed.
    """
    rmin = max(L.lengths) / 2
    top = R_MAX_FACTOR * L.perimeter
    return rmin + rmin * np.logspace(-14, np.log10((top - rmin) / rmin), samples)


def _closure_residual(lengths, E, omega, r):
    return float(np.sum(E * np.arcsin(lengths / (2.0 * r))) - np.pi * omega)


def _bisect(lengths, E, omega, a, b, rtol=1e-13):
    fa = _closure_residual(lengths, E, omega, a)
    if fa == 0.0:
        return a
    while b - a > rtol * b:
        m = 0.5 * (a + b)
        fm = _closure_residual(lengths, E, omega, m)
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _check_finite(L, signs, omegas):
    """Closure vanishes for every r when omega = 0 and the +1 and -1 edges
    carry the same lengths: a continuum of cyclic configurations."""
    if not np.any(omegas == 0):
        return
    tol = L.tau_gen
    for E in signs:
        pos = np.sort(L.array[E > 0])
        neg = np.sort(L.array[E < 0])
        if pos.size == neg.size and np.all(np.abs(pos - neg) <= tol):
            wit = tuple(int(i) + 1 for i in np.nonzero(E > 0)[0])
            raise GenericityError(
                f"cyclic configurations with E={tuple(int(x) for x in E)}, omega=0 form a "
                f"one-parameter family (l_I = l/2 for I = {wit})", witness=wit)


def _roots(L, signs, omegas, samples):
    _check_finite(L, signs, omegas)
    grid = radius_grid(L, samples)
    lengths = L.array
    table = np.arcsin(lengths[:, None] / (2.0 * grid[None, :]))
    br = kernels.scan_brackets(table, signs.astype(np.float64), omegas.astype(np.float64))
    if br.shape[0]:
        br = br[np.lexsort((br[:, 2], br[:, 1], br[:, 0]))]
    out = []
    for e_idx, w_idx, k in br:
        E = signs[e_idx]
        w = int(omegas[w_idx])
        r = _bisect(lengths, E, w, grid[k], grid[k + 1])
        out.append((tuple(int(s) for s in E), w, r))
    # roots sitting exactly on r = max(l)/2 (a diameter edge) are invisible
    # to the sign scan, which starts strictly above the endpoint
    rmin = lengths.max() / 2
    f_end = signs @ np.arcsin(np.minimum(lengths / (2.0 * rmin), 1.0))
    for e_idx, w_idx in zip(*np.nonzero(np.abs(f_end[:, None] - np.pi * omegas[None, :]) <= 1e-12 * L.n)):
        out.append((tuple(int(s) for s in signs[e_idx]), int(omegas[w_idx]), float(rmin)))
    return out


def _central_edges(L, r):
    return [i + 1 for i, l in enumerate(L.lengths) if abs(r - l / 2) <= L.tau_gen]


def _check_central(L, r, E, omega):
    hit = _central_edges(L, r)
    if hit:
        raise NonGenericCentral(
            f"root r={r!r} for E={E}, omega={omega} is central on edge(s) {hit}; "
            "perturb the linkage slightly",
            witness=tuple(hit),
        )


def _dedupe(found, L=None):
    seen = {}
    for E, w, r in found:
        if L is not None:
            # a diameter edge has no well-defined side; keep the eps = +1 copy
            hit = _central_edges(L, r)
            if any(E[i - 1] < 0 for i in hit):
                E = tuple(1 if (j + 1) in hit else s for j, s in enumerate(E))
                w = int(round(np.sum(np.array(E) * np.arcsin(np.minimum(L.array / (2 * r), 1.0))) / np.pi))
        key = (E, w)
        rs = seen.setdefault(key, [])
        if all(abs(r - q) > 1e-9 * r for q in rs):
            rs.append(r)
    return [(E, w, r) for (E, w), rs in seen.items() for r in rs]


def solve_cyclic(L: Linkage, E, omega: int, samples=DEFAULT_SAMPLES, allow_central=False):
    """All cyclic configurations of L with orientation string E and winding
    number omega.

    A root on r = l_i / 2 is a central configuration; it raises
    :class:`NonGenericCentral` unless ``allow_central`` is set.
    """
    E = np.array(E, dtype=np.int64)
    if E.shape != (L.n,):
        raise ValueError(f"orientation string must have {L.n} entries")
    found = _dedupe(_roots(L, E[None, :], np.array([omega]), samples))
    out = []
    for Es, w, r in found:
        if not allow_central:
            _check_central(L, r, Es, w)
        out.append(CyclicConfig.build(L, r, Es, w))
    return out


def all_sign_strings(n):
    return np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int64)


def _sort_key(C):
    return (round(C.area, 9), tuple(-s for s in C.E), C.omega, C.r)


def enumerate_cyclic(L: Linkage, omega_max=None, samples=DEFAULT_SAMPLES, allow_central=False):
    """Every cyclic configuration of L with |omega| <= omega_max, sorted by
    signed area; mirror partners carry each other's index in
    ``mirror_index``.

    omega = 0 is included: cyclic polygons whose circumcenter lies outside
    (e.g. a convex pentagon with one long bar) have winding number zero.
    """
    if omega_max is None:
        omega_max = math.ceil(L.n / 2)
    omegas = np.arange(-omega_max, omega_max + 1)
    found = _dedupe(_roots(L, all_sign_strings(L.n), omegas, samples), L)
    configs = []
    for E, w, r in found:
        if not allow_central:
            _check_central(L, r, E, w)
        configs.append(CyclicConfig.build(L, r, E, w))
    configs.sort(key=_sort_key)
    index = {(C.E, C.omega, round(C.r, 9)): k for k, C in enumerate(configs)}
    linked = []
    for C in configs:
        k = index.get((tuple(-s for s in C.E), -C.omega, round(C.r, 9)))
        linked.append(replace(C, mirror_index=k))
    return linked


@dataclass(frozen=True)
class EquilateralFamily:
    e: int
    omega: int
    multiplicity: int
    p: int
    alpha: float


def enumerate_equilateral(n: int):
    """Closed-form census of cyclic configurations of the odd equilateral
    n-gon: with e positive edges all half-angles equal alpha and
    (2e - n) * alpha = pi * omega, so each feasible (e, omega) is a family of
    C(n, n - e) configurations of spatial index 2p = 2e - 2*omega - 2."""
    if n < 3 or n % 2 == 0:
        raise OddOnly(f"closed-form census needs odd n >= 3, got {n}")
    fams = []
    for e in range(n + 1):
        k = 2 * e - n
        for w in range(-n, n + 1):
            if w == 0:
                continue
            alpha = np.pi * w / k
            if 0 < alpha < np.pi / 2:
                fams.append(EquilateralFamily(e, w, comb(n, n - e), e - w - 1, float(alpha)))
    fams.sort(key=lambda f: (-f.e, f.omega))
    return fams
