"""Time the numba kernels against the pure-numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat N] [--end-to-end]

Both backends are imported directly, so the POLYMORSE_NUMBA flag does not
matter here. Every kernel is checked for agreement before it is timed.
The end-to-end mode reruns a critical-point search in a subprocess under
each setting of the flag.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from polymorse import _kernels_numba as nb
from polymorse import _kernels_numpy as npk
from polymorse.cyclic import all_sign_strings, radius_grid
from polymorse.linkage import DecoratedConfig, Linkage, SpatialPolygon
from polymorse.morse import FD_STEP_REL, planar_free, spatial_free
from polymorse.spatial import random_closed_polygon
from polymorse.cyclic import enumerate_cyclic


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    """(name, numpy call, numba call, comparison) for each kernel."""
    L7 = Linkage((1.0,) * 7)
    C = enumerate_cyclic(L7)[3]
    X2 = np.ascontiguousarray(C.vertices.canonical().vertices)
    free2 = planar_free(7)
    lam2, _ = npk.multipliers(X2, free2)
    h = FD_STEP_REL * C.r

    L5 = Linkage((1.0, 1.2, 0.9, 1.1, 1.3))
    rng = np.random.default_rng(3)
    starts = []
    while len(starts) < 20:
        X = random_closed_polygon(L5, rng)
        if X is None:
            continue
        K = DecoratedConfig(SpatialPolygon(X), np.array([0.0, 0.0, 1.0])).canonical(best_gauge=True)
        starts.append((np.ascontiguousarray(K.vertices), spatial_free(5, K.gauge_vertex)))
    lengths5 = L5.array

    def newton(mod):
        out = []
        for V, free in starts:
            lam, _ = mod.multipliers(V, free)
            out.append(mod.kkt_newton(V, lengths5, free, lam, 100, 1e-10)[0])
        return out

    L9 = Linkage((1.0, 1.1, 0.9, 1.05, 0.95, 1.2, 0.8, 1.15, 0.85))
    grid = radius_grid(L9)
    table = np.arcsin(np.clip(L9.array[:, None] / (2 * grid[None, :]), -1, 1))
    signs = np.array(all_sign_strings(9), dtype=np.float64)
    omegas = np.arange(-5, 6, dtype=np.float64)

    return [
        ("fd_lagrangian_hessian n=7", lambda: npk.fd_lagrangian_hessian(X2, lam2, free2, h),
         lambda: nb.fd_lagrangian_hessian(X2, lam2, free2, h),
         lambda a, b: np.abs(a - b).max() < 1e-8),
        ("multipliers n=7", lambda: npk.multipliers(X2, free2)[0],
         lambda: nb.multipliers(X2, free2)[0],
         lambda a, b: np.abs(a - b).max() < 1e-10),
        ("kkt_newton x20 n=5", lambda: newton(npk), lambda: newton(nb),
         lambda a, b: all(np.abs(x - y).max() < 1e-7 for x, y in zip(a, b))),
        ("scan_brackets n=9", lambda: npk.scan_brackets(table, signs, omegas),
         lambda: nb.scan_brackets(table, signs, omegas),
         lambda a, b: {tuple(r) for r in a} == {tuple(r) for r in b}),
    ]


def end_to_end(lengths="1,1,1,1,3.99", trials=2000):
    code = ("import time; from polymorse import Linkage, find_critical_points;"
            f"t=time.perf_counter(); find_critical_points(Linkage.parse('{lengths}'), {trials}, 7);"
            "print(time.perf_counter()-t)")
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, POLYMORSE_NUMBA=flag)
        # one warm-up run fills the numba cache
        subprocess.run([sys.executable, "-c", code], env=env, check=True, capture_output=True)
        res = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                             capture_output=True, text=True)
        out["numba" if flag == "1" else "numpy"] = float(res.stdout.strip())
    return out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)

    print(f"{'kernel':<28s}{'numpy [ms]':>12s}{'numba [ms]':>12s}{'speed-up':>10s}")
    for name, f_np, f_nb, same in cases():
        a, b = f_np(), f_nb()  # also compiles the numba version
        if not same(a, b):
            raise SystemExit(f"{name}: backends disagree")
        t_np = _best(f_np, args.repeat)
        t_nb = _best(f_nb, args.repeat)
        print(f"{name:<28s}{1e3 * t_np:12.3f}{1e3 * t_nb:12.3f}{t_np / t_nb:10.1f}x")
    if args.end_to_end:
        r = end_to_end()
        print(f"find_critical_points (1,1,1,1,3.99), 2000 starts: numpy {r['numpy']:.2f}s, "
              f"numba {r['numba']:.2f}s ({r['numpy'] / r['numba']:.1f}x)")


if __name__ == "__main__":
    main()
