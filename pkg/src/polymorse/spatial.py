"""Critical points of S on the decorated moduli space.

Critical points come in three kinds: planar cyclic polygons with xi normal
to their plane, zig-zags (even n, vertices alternating between two lines
parallel to xi) and non-planar ones. The search below is a seeded
multistart Newton iteration on the stationarity system in the decorated
gauge chart; the classifier then checks the conditions of each kind.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .cyclic import edge_orientations, winding_number
from .errors import GenericityError, NotCritical, OddN, Unclassifiable
from .linkage import DecoratedConfig, Linkage, SpatialPolygon, is_generic, vector_area
from .morse import IndexReport, numeric_index_spatial, spatial_free, spatial_index
from .swap import sw_residual

TAU_CLASS = 1e-6
NEWTON_TOL = 1e-10

PLANAR_CYCLIC = "PlanarCyclic"
NON_PLANAR = "NonPlanar"
ZIGZAG = "ZigZag"


@dataclass
class NonPlanarEvidence:
    parallel_residual: float
    projection_cyclicity: float
    coplanarity: float
    h: np.ndarray
    pr: np.ndarray
    delta_projection: float
    E_projection: tuple
    ratio_spread: float
    closing: float

    def passes(self, tau=TAU_CLASS):
        return (
            self.parallel_residual < tau
            and self.projection_cyclicity < tau
            and self.coplanarity < tau
        )

    def to_dict(self):
        return {
            "parallel_residual": self.parallel_residual,
            "projection_cyclicity": self.projection_cyclicity,
            "coplanarity": self.coplanarity,
            "h": [float(x) for x in self.h],
            "pr": [float(x) for x in self.pr],
            "delta_projection": self.delta_projection,
            "E_projection": list(self.E_projection),
            "ratio_spread": self.ratio_spread,
            "closing": self.closing,
        }


@dataclass
class CriticalClass:
    tag: str
    evidence: dict = field(default_factory=dict)
    nonplanar: NonPlanarEvidence | None = None

    def to_dict(self):
        d = {"tag": self.tag, "evidence": self.evidence}
        if self.nonplanar is not None:
            d["nonplanar"] = self.nonplanar.to_dict()
        return d


def fit_circle(Q):
    """Algebraic least-squares circle through 2D points: (center, radius,
    max radial deviation)."""
    A = np.column_stack([2 * Q, np.ones(len(Q))])
    b = np.sum(Q * Q, axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    c = sol[:2]
    r = np.sqrt(sol[2] + c @ c)
    dev = np.max(np.abs(np.linalg.norm(Q - c, axis=1) - r))
    return c, float(r), float(dev)


def nonplanar_evidence(C: DecoratedConfig) -> NonPlanarEvidence:
    K = C.canonical()
    V = K.vertices
    xi = K.xi
    n = K.n
    diam = K.polygon.diameter()
    S = vector_area(V)
    Sn = np.linalg.norm(S)
    parallel = float(np.arccos(min(1.0, abs(S @ xi) / Sn))) if Sn > 0 else np.pi / 2
    Q = V[:, :2]
    c, r, dev = fit_circle(Q)
    E = edge_orientations(Q, c)
    edges = np.roll(V, -1, axis=0) - V
    h = edges @ xi
    pr = np.linalg.norm(edges[:, :2], axis=1)
    alphas = np.arcsin(np.clip(pr / (2 * r), 0.0, 1.0))
    d_proj = float(np.sum(np.array(E) * np.tan(alphas)))
    prv = np.roll(V, 1, axis=0)
    nxt = np.roll(V, -1, axis=0)
    D = nxt - prv
    T = 0.5 * np.cross(V - prv, D)
    trip = np.einsum("ij,ij->i", np.cross(T, np.broadcast_to(S, T.shape)), D)
    norm = np.linalg.norm(T, axis=1) * Sn * np.linalg.norm(D, axis=1)
    cop = float(np.max(np.abs(trip) / np.where(norm > 0, norm, 1.0)))
    ratio = np.array(E) * h * np.cos(alphas) / pr
    spread = float(np.ptp(ratio) / max(np.max(np.abs(ratio)), 1e-300))
    return NonPlanarEvidence(
        parallel_residual=parallel,
        projection_cyclicity=dev / diam,
        coplanarity=cop,
        h=h,
        pr=pr,
        delta_projection=d_proj,
        E_projection=E,
        ratio_spread=spread,
        closing=float(abs(h.sum()) / diam),
    )


def classify(C: DecoratedConfig, tau=TAU_CLASS) -> CriticalClass:
    """Sort a critical (P, xi) into PlanarCyclic, ZigZag or NonPlanar.

    Raises :class:`Unclassifiable` if none of the three sets of conditions
    holds to ``tau`` (relative to the polygon diameter for lengths).
    """
    K = C.canonical()
    V = K.vertices
    n = K.n
    diam = K.polygon.diameter()
    ctr = V.mean(axis=0)
    _, s, Vt = np.linalg.svd(V - ctr)
    normal = Vt[-1]
    flat = float(np.max(np.abs((V - ctr) @ normal)) / diam)
    xi = K.xi
    ev = {"planarity": flat}
    if flat < tau:
        tilt = float(np.linalg.norm(np.cross(normal, xi)))
        along = float(abs(normal @ xi))
        ev.update(normal_tilt=tilt, normal_along_xi=along)
        if tilt < tau:
            c, r, dev = fit_circle(V[:, :2])
            ev.update(circle_residual=dev / diam, radius=r)
            if dev / diam < tau:
                ev.update(e=sum(1 for x in edge_orientations(V[:, :2], c) if x > 0),
                          omega=winding_number(V[:, :2], c))
                return CriticalClass(PLANAR_CYCLIC, ev)
        elif along < tau and n % 2 == 0:
            w = np.cross(normal, xi)
            w /= np.linalg.norm(w)
            t = V @ w
            res = max(np.ptp(t[0::2]), np.ptp(t[1::2])) / diam
            sep = abs(t[0::2].mean() - t[1::2].mean()) / diam
            ev.update(zigzag_residual=float(res), separation=float(sep))
            if res < tau and sep > tau:
                return CriticalClass(ZIGZAG, ev)
    npe = nonplanar_evidence(K)
    if npe.passes(tau) and flat >= tau:
        return CriticalClass(NON_PLANAR, ev, npe)
    raise Unclassifiable(f"critical point matches no class: {ev}", evidence=(ev, npe))


# -- zig-zags -------------------------------------------------------------------

@dataclass
class ZigZagSolution:
    config: DecoratedConfig
    h: float
    signs: tuple


def _zigzag_f(lengths, signs, h):
    return float(np.sum(signs * np.sqrt(np.maximum(lengths * lengths - h * h, 0.0))))


def solve_zigzag(L: Linkage, signs, samples=4096, degenerate_tol=1e-12):
    """Zig-zag critical points with horizontal step signs ``signs``.

    The two lines are parallel to xi = e_z at distance h; edge i advances
    along xi by signs[i] * sqrt(l_i^2 - h^2), and closure along xi requires
    the signed sum to vanish. Returns a list of :class:`ZigZagSolution`;
    an identically vanishing equation (a continuum of zig-zags) is flagged
    by returning an empty list with ``degenerate`` set on the function's
    ``last_degenerate`` attribute.
    """
    if L.n % 2:
        raise OddN(f"zig-zags need even n, got {L.n}")
    lengths = L.array
    tau = np.array(signs, dtype=float)
    if tau.shape != (L.n,) or not np.all(np.abs(tau) == 1):
        raise ValueError("signs must be n entries of +1/-1")
    hmax = lengths.min()
    hs = hmax * (np.arange(1, samples + 1) / (samples + 1))
    S = np.sqrt(lengths[:, None] ** 2 - hs[None, :] ** 2)
    f = tau @ S
    scale = lengths.sum()
    solve_zigzag.last_degenerate = bool(np.max(np.abs(f)) <= degenerate_tol * scale)
    if solve_zigzag.last_degenerate:
        return []
    out = []
    for k in np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]:
        a, b = hs[k], hs[k + 1]
        fa = f[k]
        while b - a > 1e-15 * hmax:
            m = 0.5 * (a + b)
            fm = _zigzag_f(lengths, tau, m)
            if fm == 0.0:
                a = b = m
                break
            if (fm < 0) == (fa < 0):
                a, fa = m, fm
            else:
                b = m
        h = 0.5 * (a + b)
        steps = np.column_stack([
            h * np.array([1.0 if i % 2 == 0 else -1.0 for i in range(L.n)]),
            np.zeros(L.n),
            tau * np.sqrt(lengths**2 - h * h),
        ])
        V = np.vstack([np.zeros(3), np.cumsum(steps, axis=0)[:-1]])
        out.append(ZigZagSolution(DecoratedConfig(SpatialPolygon(V), np.array([0.0, 0.0, 1.0])), h, tuple(int(x) for x in tau)))
    return out


solve_zigzag.last_degenerate = False


def all_zigzags(L: Linkage):
    """Zig-zag critical points over every sign pattern (both xi directions
    are covered because negating the signs flips xi)."""
    out = []
    for signs in itertools.product((1, -1), repeat=L.n):
        out.extend(solve_zigzag(L, signs))
    return out


# -- multistart search ----------------------------------------------------------

@dataclass
class CriticalPoint:
    config: DecoratedConfig
    report: IndexReport
    klass: CriticalClass
    value: float
    hits: int = 1

    @property
    def index(self):
        return self.report.numeric_index

    def to_dict(self):
        from .linkage import polygon_to_dict

        return {
            "class": self.klass.to_dict(),
            "value": self.value,
            "hits": self.hits,
            "index": self.report.to_dict(),
            "config": polygon_to_dict(self.config),
        }


@dataclass
class SearchResult:
    linkage: Linkage
    trials: int
    seed: int
    converged: int
    failures: int
    points: list

    @property
    def histogram(self):
        return index_histogram(p.index for p in self.points)

    def by_class(self, tag):
        return [p for p in self.points if p.klass.tag == tag]

    def to_dict(self):
        return {
            "lengths": list(self.linkage.lengths),
            "trials": self.trials,
            "seed": self.seed,
            "converged": self.converged,
            "failures": self.failures,
            "distinct": len(self.points),
            "points": [p.to_dict() for p in self.points],
        }


def index_histogram(indices):
    h = {}
    for i in indices:
        h[i] = h.get(i, 0) + 1
    return dict(sorted(h.items()))


def random_closed_polygon(L: Linkage, rng, maxiter=100):
    """A random spatial configuration of L: random edge directions, then a
    Gauss-Newton projection onto the length constraints. ``None`` if the
    projection stalls."""
    lengths = L.array
    U = rng.normal(size=(L.n, 3))
    U /= np.linalg.norm(U, axis=1)[:, None]
    X = np.vstack([np.zeros(3), np.cumsum(U * lengths[:, None], axis=0)[:-1]])
    free = np.arange(3, 3 * L.n, dtype=np.int64)
    X, err = kernels.project_closure(X, lengths, free, maxiter, 1e-12)
    if not np.isfinite(err) or err > 1e-10:
        return None
    return X


def _newton_from(X, lengths, maxiter=100, tol=NEWTON_TOL):
    """Newton in the best-conditioned gauge chart, then a short polish in
    the chart re-chosen at the limit point: a point that only looks critical
    because the gauge vertex drifted onto the xi axis fails the polish."""
    zhat = np.array([0.0, 0.0, 1.0])
    for iters in (maxiter, 10):
        K = DecoratedConfig(SpatialPolygon(X), zhat).canonical(best_gauge=True)
        V = np.ascontiguousarray(K.vertices)
        free = spatial_free(K.n, K.gauge_vertex)
        lam, _ = kernels.multipliers(V, free)
        X, lam, gres, cres, it, ok = kernels.kkt_newton(V, lengths, free, lam, iters, tol)
        if not ok:
            return None
    return DecoratedConfig(SpatialPolygon(X), zhat).canonical()


def _same_point(A, B, tol):
    return A.congruence_residual(B) <= tol


def find_critical_points(L: Linkage, trials=2000, seed=7, require_generic=True):
    """Seeded multistart Newton search for critical points of S.

    Distinct points are identified up to rigid motions of the pair
    (P, xi), so mirror images and (P, xi) versus (P, -xi) stay separate. Completeness is not guaranteed; the result records trials,
    convergence counts and per-point hit counts.
    """
    if require_generic:
        ok, wit = is_generic(L)
        if not ok:
            raise GenericityError(f"linkage {L} is not generic: l_I = l/2 for I = {wit}", witness=wit)
    rng = np.random.default_rng(seed)
    lengths = L.array
    diam_scale = L.perimeter
    found: list[CriticalPoint] = []
    converged = failures = 0
    for _ in range(trials):
        X = random_closed_polygon(L, rng)
        K = None if X is None else _newton_from(X, lengths)
        if K is None:
            failures += 1
            continue
        converged += 1
        tol = 1e-6 * diam_scale
        match = next((p for p in found if _same_point(p.config, K, tol)), None)
        if match is not None:
            match.hits += 1
            continue
        try:
            klass = classify(K)
        except Unclassifiable:
            failures += 1
            continue
        formula = None
        if klass.tag == PLANAR_CYCLIC:
            formula = spatial_index(klass.evidence["e"], klass.evidence["omega"])
        try:
            rep = numeric_index_spatial(K, formula_index=formula)
        except NotCritical:
            failures += 1
            continue
        found.append(CriticalPoint(K, rep, klass, float(vector_area(K.vertices)[2])))
    found.sort(key=lambda p: (p.value, p.klass.tag, tuple(np.round(p.config.vertices.ravel(), 6))))
    return SearchResult(L, trials, seed, converged, failures, found)


def check_sw_invariance(points, tol=1e-6):
    """Largest SW residual (relative to diameter) over found critical points."""
    return max((sw_residual(p.config.polygon) / p.config.polygon.diameter() for p in points), default=0.0)


def mirror_partner(C: DecoratedConfig):
    """Canonical form of the mirror image of (P, xi) composed with xi -> -xi,
    i.e. the reflected polygon with the same xi."""
    M = np.diag([1.0, 1.0, -1.0])
    return DecoratedConfig(SpatialPolygon(C.vertices @ M), C.xi).canonical()

