"""Morse indices: closed forms and an independent constrained-Hessian check.

The numerical route works in a gauge chart of the moduli space (p_1 pinned
at the origin plus one rotational gauge coordinate), imposes the n length
constraints g_i = |p_{i+1} - p_i|^2 - l_i^2 = 0, recovers the Lagrange
multipliers by least squares and counts the negative eigenvalues of the
Lagrangian Hessian restricted to the null space of the constraint Jacobian.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .cyclic import CyclicConfig, delta
from .errors import Degenerate, GaugeFailure, IndexOutOfRange, NotCritical
from .linkage import DecoratedConfig

TAU_CRIT = 1e-7
TAU_EIG_REL = 1e-6
FD_STEP_REL = 1e-5


def planar_index(C: CyclicConfig) -> int:
    """Morse index of the signed area at a generic cyclic configuration:
    e - 1 - 2*omega if delta > 0, else e - 2 - 2*omega."""
    d = delta(C)
    mu = C.e - 1 - 2 * C.omega if d > 0 else C.e - 2 - 2 * C.omega
    if not 0 <= mu <= C.n - 3:
        raise IndexOutOfRange(f"planar index {mu} outside [0, {C.n - 3}] for {C!r}")
    return mu


def spatial_index(e: int, omega: int, n: int | None = None) -> int:
    """Morse index 2e - 2*omega - 2 of S at a planar cyclic critical point,
    with e and omega read in the plane cooriented by xi."""
    mu = 2 * e - 2 * omega - 2
    hi = 2 * n - 4 if n is not None else None
    if mu < 0 or (hi is not None and mu > hi):
        raise IndexOutOfRange(f"spatial index {mu} outside [0, {hi}] for e={e}, omega={omega}")
    return mu


def coorientation_flip(e: int, omega: int, n: int):
    """(e, omega) of the same polygon read with -xi."""
    e2, w2 = n - e, -omega
    assert (2 * e - 2 * omega - 2) + (2 * e2 - 2 * w2 - 2) == 2 * n - 4
    return e2, w2


@dataclass
class IndexReport:
    formula_index: int | None
    numeric_index: int
    degenerate: bool
    gradient_norm: float
    eigenvalues: np.ndarray
    manifold_dim: int
    multipliers: np.ndarray = field(repr=False, default=None)

    @property
    def agrees(self):
        return self.formula_index is None or self.formula_index == self.numeric_index

    def to_dict(self):
        return {
            "formula_index": self.formula_index,
            "numeric_index": self.numeric_index,
            "degenerate": self.degenerate,
            "gradient_norm": self.gradient_norm,
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "manifold_dim": self.manifold_dim,
        }


def planar_free(n):
    """Free flattened coordinates of the planar chart (p_1 = 0, y_2 = 0)."""
    return np.array([2] + list(range(4, 2 * n)), dtype=np.int64)


def spatial_free(n, gauge_vertex=1):
    """Free coordinates of the decorated chart (xi = e_z, p_1 = 0 and the
    gauge vertex on y = 0)."""
    pinned = {0, 1, 2, 3 * gauge_vertex + 1}
    return np.array([j for j in range(3 * n) if j not in pinned], dtype=np.int64)


def constrained_index(X, lengths, free, h, tau_crit=TAU_CRIT, tau_eig_rel=TAU_EIG_REL,
                      formula_index=None, raise_degenerate=False):
    """Index of the area functional at X restricted to the length constraints.

    ``gradient_norm`` is the least-squares stationarity residual relative to
    the norm of the objective gradient.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    lengths = np.asarray(lengths, dtype=np.float64)
    lam, gnorm = kernels.multipliers(X, free)
    if gnorm > tau_crit:
        raise NotCritical(f"stationarity residual {gnorm:.3g} > {tau_crit:.3g}", gradient_norm=gnorm)
    J = kernels.constraint_jacobian(X)[:, free]
    _, s, Vt = np.linalg.svd(J)
    rank = int(np.sum(s > 1e-10 * s[0]))
    if rank < J.shape[0]:
        raise Degenerate(f"constraint Jacobian has rank {rank} < {J.shape[0]} (singular point)")
    Z = Vt[rank:].T
    dim = Z.shape[1]
    if dim == 0:
        eig = np.zeros(0)
        mu, degen = 0, False
    else:
        H = kernels.fd_lagrangian_hessian(X, lam, free, h)
        eig = np.linalg.eigvalsh(Z.T @ H @ Z)
        tau = tau_eig_rel * np.max(np.abs(eig))
        mu = int(np.sum(eig < -tau))
        degen = bool(np.any(np.abs(eig) <= tau))
    if degen and raise_degenerate:
        raise Degenerate(f"near-zero Hessian eigenvalue: {eig}")
    return IndexReport(formula_index, mu, degen, float(gnorm), eig, dim, lam)


def _formula_or_none(C: CyclicConfig):
    try:
        return planar_index(C)
    except Exception:
        return None


def numeric_index_planar(C: CyclicConfig, h=None, **kw) -> IndexReport:
    P = C.vertices.canonical()
    step = FD_STEP_REL * C.r if h is None else h
    return constrained_index(P.vertices, C.linkage.array, planar_free(C.n), step,
                             formula_index=_formula_or_none(C), **kw)


def numeric_index_spatial(C: DecoratedConfig, formula_index=None, h=None, **kw) -> IndexReport:
    K = C.canonical(best_gauge=True)
    V = K.vertices
    k = K.gauge_vertex
    if np.hypot(V[k, 0], V[k, 1]) <= 1e-8 * max(K.polygon.diameter(), 1e-300):
        raise GaugeFailure("every vertex lies on the xi axis; no rotational gauge available")
    step = FD_STEP_REL * K.polygon.diameter() if h is None else h
    return constrained_index(V, K.polygon.edge_lengths(), spatial_free(C.n, k), step,
                             formula_index=formula_index, **kw)


def decorated_formula_index(C: CyclicConfig, xi_sign=1) -> int:
    e, w = (C.e, C.omega) if xi_sign > 0 else coorientation_flip(C.e, C.omega, C.n)
    return spatial_index(e, w, C.n)
