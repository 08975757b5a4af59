"""Cyclic deformations traced in half-angle space.

The circumradius is held fixed and the signed half-angles theta_i = eps_i *
alpha_i move, so every intermediate polygon is inscribed by construction.
Edges scheduled for contraction shrink linearly to zero at staggered times;
the remaining edges interpolate linearly towards the target and absorb the
closure defect equally, keeping sum(theta) = pi * omega exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cyclic import CyclicConfig
from .errors import CentralCrossing, ClosureViolation, DeltaCrossing
from .linkage import TAU_NUM
from .morse import planar_index, spatial_index

DEFAULT_STEPS = 10_000
T_RESOLUTION = 1e-6
MAX_LOG_ROWS = 1000


@dataclass
class DeformationLog:
    steps: list  # (t, thetas, delta); contracted edges carry theta = 0
    contractions: list  # (t, 1-based start edge, eps)
    start_index: int
    end_index: int
    target_index: int
    start_planar: int | None = None
    end_planar: int | None = None
    target_planar: int | None = None
    omega: int = 0
    radius: float = 1.0
    meta: dict = field(default_factory=dict)

    @property
    def consistent(self):
        ok = self.end_index == self.target_index
        if self.end_planar is not None and self.target_planar is not None:
            ok = ok and self.end_planar == self.target_planar
        return ok

    @property
    def delta_sign(self):
        return int(np.sign(self.steps[0][2]))

    def to_dict(self, max_rows=MAX_LOG_ROWS):
        idx = np.unique(np.linspace(0, len(self.steps) - 1, min(max_rows, len(self.steps))).astype(int))
        return {
            "radius": self.radius,
            "omega": self.omega,
            "start_index": self.start_index,
            "end_index": self.end_index,
            "target_index": self.target_index,
            "start_planar_index": self.start_planar,
            "end_planar_index": self.end_planar,
            "target_planar_index": self.target_planar,
            "consistent": self.consistent,
            "contractions": [
                {"t": float(t), "edge": int(i), "eps": int(s)} for t, i, s in self.contractions
            ],
            "steps": [
                {"t": float(self.steps[k][0]),
                 "thetas": [float(x) for x in self.steps[k][1]],
                 "delta": float(self.steps[k][2])}
                for k in idx
            ],
            **self.meta,
        }


def _path(theta0, theta1, contract, times, t):
    """Half-angle vectors at the times ``t`` (shape (m,)); returns (m, n)
    with contracted edges at exactly zero once their time has passed."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = theta0.size
    keep = np.array([j for j in range(n) if j not in contract], dtype=int)
    Th = np.zeros((t.size, n))
    for j, tj in zip(contract, times):
        Th[:, j] = theta0[j] * np.clip(1.0 - t / tj, 0.0, None)
    Th[:, keep] = (1.0 - t)[:, None] * theta0[keep] + t[:, None] * theta1[None, :]
    defect = theta0.sum() - Th.sum(axis=1)
    Th[:, keep] += defect[:, None] / keep.size
    return Th


def _delta(Th):
    return np.sum(np.sign(Th) * np.abs(np.tan(Th)), axis=1)


def _bisect(f, a, b, res):
    """Shrink [a, b] with f(a) != f(b) to width ``res``; returns the midpoint."""
    fa = f(a)
    while b - a > res:
        m = 0.5 * (a + b)
        if f(m) == fa:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def trace_deformation(start: CyclicConfig, target: CyclicConfig, contract=(), times=None,
                      steps=DEFAULT_STEPS, t_res=T_RESOLUTION) -> DeformationLog:
    """Deform ``start`` into ``target`` along a cyclic path.

    ``contract`` lists the 1-based edges of ``start`` that shrink to zero;
    the surviving edges map in order onto the edges of ``target``.
    ``times`` are the contraction times, staggered evenly by default.
    """
    theta0 = np.array(start.thetas, dtype=float)
    n0 = theta0.size
    contract = [int(i) - 1 for i in contract]
    if len(set(contract)) != len(contract) or any(not 0 <= j < n0 for j in contract):
        raise ValueError(f"bad contraction list {contract}")
    keep = [j for j in range(n0) if j not in contract]
    theta1 = np.array(target.thetas, dtype=float)
    if theta1.size != len(keep):
        raise ValueError(f"{len(keep)} surviving edges cannot map onto a {theta1.size}-gon")
    if np.any(np.sign(theta0[keep]) != np.sign(theta1)):
        raise ValueError("a surviving edge would change orientation; contract it instead")
    if start.omega != target.omega:
        raise ClosureViolation(
            f"winding number is conserved along cyclic paths: {start.omega} -> {target.omega}")
    if times is None:
        times = [(k + 1) / (len(contract) + 1) for k in range(len(contract))]
    times = [float(x) for x in times]
    if len(times) != len(contract) or any(not 0 < x <= 1 for x in times):
        raise ValueError(f"contraction times {times} must lie in (0, 1]")

    grid = np.linspace(0.0, 1.0, steps + 1)
    Th = _path(theta0, theta1, contract, times, grid)
    closure = np.abs(Th.sum(axis=1) - np.pi * start.omega)
    if closure.max() > TAU_NUM * max(1, n0):
        raise ClosureViolation(f"closure drift {closure.max():.3g}")

    # central crossing: some |theta_i| reaches pi/2
    hit = np.nonzero(np.any(np.abs(Th) >= np.pi / 2, axis=1))[0]
    if hit.size:
        k = int(hit[0])
        edge = int(np.argmax(np.abs(Th[k])))
        tc = _bisect(lambda s: bool(np.abs(_path(theta0, theta1, contract, times, s)[0, edge]) >= np.pi / 2),
                     grid[k - 1], grid[k], t_res)
        raise CentralCrossing(f"edge {edge + 1} passes through the center at t={tc:.7f}", t=tc, edge=edge + 1)

    # surviving edges must stay away from zero
    if np.any(np.sign(Th[:, keep]) != np.sign(theta1)[None, :]):
        raise ClosureViolation("a surviving edge degenerated along the path")

    # contraction events, located by the sign of the extrapolated linear shrink
    events = []
    for j, tj in zip(contract, times):
        raw = lambda s, j=j, tj=tj: bool(theta0[j] * (1.0 - s / tj) * np.sign(theta0[j]) > 0)
        k = int(np.searchsorted(grid, tj))
        lo = grid[max(k - 1, 0)]
        hi = min(grid[min(k + 1, steps)] + t_res, 1.0 + t_res)
        events.append((float(_bisect(raw, lo, hi, t_res)), j + 1, int(np.sign(theta0[j]))))
    events.sort()

    d = _delta(Th)
    s0 = np.sign(d[0])
    bad = np.nonzero(np.sign(d) != s0)[0]
    if s0 == 0 or bad.size:
        k = int(bad[0]) if bad.size else 0
        tc = 0.0 if k == 0 else _bisect(
            lambda s: bool(np.sign(_delta(_path(theta0, theta1, contract, times, s))[0]) == s0),
            grid[k - 1], grid[k], t_res)
        raise DeltaCrossing(f"delta changes sign at t={tc:.7f}", t=tc)

    start_idx = spatial_index(start.e, start.omega, n0)
    positive = sum(1 for _, _, s in events if s > 0)
    end_idx = start_idx - 2 * positive
    target_idx = spatial_index(target.e, target.omega, target.n)
    try:
        sp, tp = planar_index(start), planar_index(target)
        ep = sp - positive
    except Exception:
        sp = ep = tp = None

    rows = [(float(t), Th[k].copy(), float(d[k])) for k, t in enumerate(grid)]
    return DeformationLog(rows, events, start_idx, end_idx, target_idx, sp, ep, tp,
                          omega=start.omega, radius=start.r,
                          meta={"steps_total": steps + 1, "t_resolution": t_res,
                                "start_E": list(start.E), "target_E": list(target.E)})


def heptagon_to_pentagram(steps=DEFAULT_STEPS):
    """Equilateral heptagon with one negative edge (e=6, omega=2) contracted
    to the pentagram by removing the negative edge and one positive edge."""
    a = 2 * np.pi / 5
    start = CyclicConfig.from_half_angles([-a] + [a] * 6)
    target = CyclicConfig.from_half_angles([a] * 5)
    return trace_deformation(start, target, contract=(1, 2), steps=steps)
