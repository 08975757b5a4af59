"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 genericity failure, 3 mismatch
(index disagreement or a non-perfect verdict), 4 numerical or deformation
failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from ._accel import backend_name
from .cyclic import CyclicConfig, enumerate_cyclic
from .deform import heptagon_to_pentagram, trace_deformation
from .errors import (
    DeformationError,
    GenericityError,
    NumericError,
    OddN,
    PolymorseError,
)
from .linkage import (
    DecoratedConfig,
    Linkage,
    PlanarPolygon,
    SpatialPolygon,
    align,
    is_generic,
    polygon_from_dict,
    polygon_to_dict,
)
from .morse import (
    TAU_EIG_REL,
    decorated_formula_index,
    numeric_index_planar,
    numeric_index_spatial,
    planar_index,
)
from .render import render_svg
from .spatial import NON_PLANAR, ZIGZAG, all_zigzags, classify, find_critical_points
from .swap import is_sw_invariant, sw, sw_residual, swap_vertex
from .topology import PERFECT, klyachko_betti, verify_perfect_morse

EXIT_OK, EXIT_INPUT, EXIT_GENERIC, EXIT_MISMATCH, EXIT_NUMERIC = 0, 1, 2, 3, 4


# -- helpers ----------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def _emit(doc, path):
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    elif path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _svg_path(args, name):
    if not args.svg:
        return None
    os.makedirs(args.svg, exist_ok=True)
    return os.path.join(args.svg, name)


def load_config(path):
    """A CyclicConfig (keys r, E, omega or thetas) or a polygon JSON."""
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    if "thetas" in d:
        return CyclicConfig.from_half_angles(d["thetas"], float(d.get("r", 1.0)))
    if {"r", "E", "omega", "lengths"} <= d.keys():
        return CyclicConfig.from_dict(d)
    return polygon_from_dict(d)


def _tol(args, default):
    return default if args.tol is None else args.tol


def _ints(text):
    return [int(t) for t in text.split(",") if t.strip()]


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


# -- suite ---------------------------------------------------------------------------

def run_suite(L: Linkage, trials=2000, seed=7, tol=TAU_EIG_REL, svg_dir=None):
    """Enumerate, index, search and certify; returns (document, exit code)."""
    t0 = time.perf_counter()
    doc = {"lengths": list(L.lengths), "seed": seed, "trials": trials,
           "tolerances": {"eig_rel": tol}, "backend": backend_name(), "checks": {}}
    ok, wit = is_generic(L)
    if not ok:
        doc["error"] = f"not generic: l_I = l/2 for I = {list(wit)}"
        return doc, EXIT_GENERIC
    code = EXIT_OK
    checks = doc["checks"]

    configs = enumerate_cyclic(L)
    rows, planar_mismatch, spatial_mismatch, sw_fail = [], 0, 0, 0
    critical = []
    for k, C in enumerate(configs):
        row = C.to_dict()
        rp = None
        try:
            rp = numeric_index_planar(C, tau_eig_rel=tol)
            row["planar"] = rp.to_dict()
            planar_mismatch += 0 if rp.agrees else 1
        except PolymorseError as exc:
            row["planar_error"] = f"{type(exc).__name__}: {exc}"
            planar_mismatch += 1
        f = decorated_formula_index(C, +1)
        D = C.to_decorated(+1)
        rs = numeric_index_spatial(D, formula_index=f, tau_eig_rel=tol)
        row["spatial"] = rs.to_dict()
        spatial_mismatch += 0 if rs.agrees else 1
        row["sw_residual"] = sw_residual(C.vertices)
        sw_fail += 0 if is_sw_invariant(C.vertices) else 1
        rows.append(row)
        critical.append({"class": "PlanarCyclic", "index": f, "E": list(C.E), "omega": C.omega})
        if svg_dir:
            render_svg(C, os.path.join(svg_dir, f"cyclic_{k:03d}.svg"), index=rp.formula_index if rp else None)
    doc["cyclic"] = rows
    checks.update(planar_index_mismatches=planar_mismatch,
                  spatial_index_mismatches=spatial_mismatch, sw_failures=sw_fail)

    zz = []
    if L.n % 2 == 0:
        for k, z in enumerate(all_zigzags(L)):
            rep = numeric_index_spatial(z.config, tau_eig_rel=tol)
            klass = classify(z.config)
            zz.append({"h": z.h, "signs": list(z.signs), "index": rep.to_dict(),
                       "class": klass.tag, "config": polygon_to_dict(z.config)})
            critical.append({"class": ZIGZAG, "index": rep.numeric_index})
            if svg_dir:
                render_svg(z.config, os.path.join(svg_dir, f"zigzag_{k:02d}.svg"),
                           index=rep.numeric_index, label="zig-zag")
    doc["zigzags"] = zz

    search = find_critical_points(L, trials=trials, seed=seed)
    doc["search"] = search.to_dict()
    nonplanar = search.by_class(NON_PLANAR)
    for k, p in enumerate(nonplanar):
        critical.append({"class": NON_PLANAR, "index": p.index})
        if svg_dir:
            render_svg(p.config, os.path.join(svg_dir, f"nonplanar_{k:02d}.svg"),
                       index=p.index, label="non-planar")
    found_planar = len(search.by_class("PlanarCyclic"))
    found_zz = len(search.by_class(ZIGZAG))
    checks.update(search_planar=found_planar, search_zigzag=found_zz,
                  search_nonplanar=len(nonplanar),
                  search_within_census=found_planar <= len(configs) and found_zz <= len(zz))

    betti = klyachko_betti(L).check()
    report = verify_perfect_morse(L, [c["index"] for c in critical], betti)
    doc["critical"] = critical
    doc["morse"] = report.to_dict()
    doc["summary"] = {
        "critical_points": len(critical),
        "planar": len(configs),
        "zigzag": len(zz),
        "nonplanar": len(nonplanar),
        "verdict": report.verdict,
    }
    if planar_mismatch or spatial_mismatch or sw_fail or report.verdict != PERFECT \
            or not checks["search_within_census"]:
        code = EXIT_MISMATCH
    doc["seconds"] = round(time.perf_counter() - t0, 3)
    return doc, code


# -- subcommands ---------------------------------------------------------------------

def cmd_cyclic(args):
    L = Linkage.parse(args.lengths)
    configs = enumerate_cyclic(L, allow_central=args.allow_central)
    out = []
    for k, C in enumerate(configs):
        row = C.to_dict()
        try:
            row["planar_index"] = planar_index(C)
        except PolymorseError as exc:
            row["planar_index"] = None
            row["note"] = type(exc).__name__
        out.append(row)
        path = _svg_path(args, f"cyclic_{k:03d}.svg")
        if path:
            render_svg(C, path, index=row["planar_index"])
        sig = "".join("+" if s > 0 else "-" for s in C.E)
        print(f"{k:3d}  E={sig}  omega={C.omega:+d}  r={C.r:.9f}  A={C.area:+.6f}  "
              f"mu={row['planar_index']}")
    print(f"{len(configs)} cyclic configurations")
    _emit({"lengths": list(L.lengths), "configurations": out}, args.json)
    return EXIT_OK


def cmd_morse(args):
    L = Linkage.parse(args.lengths)
    tol = _tol(args, TAU_EIG_REL)
    out, bad = [], 0
    for C in enumerate_cyclic(L):
        row = {"E": list(C.E), "omega": C.omega, "r": C.r}
        try:
            row["planar_formula"] = planar_index(C)
        except PolymorseError as exc:
            row["planar_formula"] = None
            row["note"] = type(exc).__name__
        row["spatial_formula"] = [decorated_formula_index(C, +1), decorated_formula_index(C, -1)]
        if args.numeric:
            rp = numeric_index_planar(C, tau_eig_rel=tol)
            sp = [numeric_index_spatial(C.to_decorated(s), formula_index=f, tau_eig_rel=tol)
                  for s, f in zip((1, -1), row["spatial_formula"])]
            row["planar"] = rp.to_dict()
            row["spatial"] = [r.to_dict() for r in sp]
            bad += (not rp.agrees) + sum(not r.agrees for r in sp)
        out.append(row)
        sig = "".join("+" if s > 0 else "-" for s in C.E)
        extra = ""
        if args.numeric:
            extra = f"  numeric={row['planar']['numeric_index']}," \
                    f"{[r['numeric_index'] for r in row['spatial']]}"
        print(f"E={sig} omega={C.omega:+d} planar={row['planar_formula']} "
              f"spatial(+xi,-xi)={row['spatial_formula']}{extra}")
    if args.numeric:
        print(f"mismatches: {bad}")
    _emit({"lengths": list(L.lengths), "reports": out, "mismatches": bad}, args.json)
    return EXIT_MISMATCH if bad else EXIT_OK


def _polygon_of(obj):
    if isinstance(obj, CyclicConfig):
        return obj.vertices
    if isinstance(obj, DecoratedConfig):
        return obj.polygon
    return obj


def cmd_swap(args):
    P = _polygon_of(load_config(args.config))
    Q = swap_vertex(P, args.vertex)
    print(f"s_{args.vertex}: lengths {np.round(P.edge_lengths(), 9).tolist()} -> "
          f"{np.round(Q.edge_lengths(), 9).tolist()}")
    _emit(polygon_to_dict(Q), args.json or "-")
    return EXIT_OK


def cmd_sw(args):
    P = _polygon_of(load_config(args.config))
    Q = sw(P)
    res = align(Q, P)
    inv = is_sw_invariant(P, tol=None if args.tol is None else args.tol * P.diameter())
    print(f"SW residual {res:.3e}  invariant={inv}")
    _emit({"polygon": polygon_to_dict(Q), "residual": res, "invariant": inv}, args.json)
    return EXIT_OK


def cmd_find(args):
    L = Linkage.parse(args.lengths)
    R = find_critical_points(L, trials=args.trials, seed=args.seed)
    for k, p in enumerate(R.points):
        print(f"{k:3d}  {p.klass.tag:<13s} index={p.index}  S={p.value:+.9f}  hits={p.hits}")
        path = _svg_path(args, f"critical_{k:02d}.svg")
        if path:
            render_svg(p.config, path, index=p.index, label=p.klass.tag)
    print(f"{len(R.points)} distinct points from {R.trials} starts "
          f"({R.converged} converged, {R.failures} rejected); histogram {R.histogram}")
    _emit(R.to_dict(), args.json)
    return EXIT_OK


def cmd_zigzag(args):
    L = Linkage.parse(args.lengths)
    out = []
    for k, z in enumerate(all_zigzags(L)):
        rep = numeric_index_spatial(z.config)
        out.append({"h": z.h, "signs": list(z.signs), "index": rep.numeric_index,
                    "config": polygon_to_dict(z.config)})
        print(f"signs={''.join('+' if s > 0 else '-' for s in z.signs)}  h={z.h:.12f}  "
              f"index={rep.numeric_index}")
        path = _svg_path(args, f"zigzag_{k:02d}.svg")
        if path:
            render_svg(z.config, path, index=rep.numeric_index, label="zig-zag")
    print(f"{len(out)} zig-zag critical points")
    _emit({"lengths": list(L.lengths), "zigzags": out}, args.json)
    return EXIT_OK


def cmd_betti(args):
    L = Linkage.parse(args.lengths)
    B = klyachko_betti(L).check()
    print(f"base      {B.base}")
    print(f"decorated {B.decorated}")
    _emit(B.to_dict(), args.json)
    return EXIT_OK


def cmd_verify(args):
    L = Linkage.parse(args.lengths)
    doc, code = run_suite(L, trials=args.trials, seed=args.seed, tol=_tol(args, TAU_EIG_REL))
    m = doc.get("morse", {})
    print(f"decorated betti {m.get('decorated')}  histogram {m.get('histogram')}  "
          f"verdict {m.get('verdict')}")
    for d in m.get("deficits", []):
        print(f"  degree {d['degree']}: betti {d['betti']} vs {d['critical']} critical points")
    _emit(m, args.json)
    return code


def cmd_deform(args):
    if args.preset:
        log = heptagon_to_pentagram(steps=args.steps)
    else:
        if not (args.source and args.target):
            raise ValueError("deform needs --from and --to (or --preset)")
        start, target = load_config(args.source), load_config(args.target)
        if not (isinstance(start, CyclicConfig) and isinstance(target, CyclicConfig)):
            raise ValueError("deform endpoints must be cyclic configurations")
        contract = _ints(args.contract) if args.contract else ()
        times = _floats(args.times) if args.times else None
        log = trace_deformation(start, target, contract=contract, times=times, steps=args.steps)
    for t, edge, eps in log.contractions:
        print(f"t={t:.7f}  edge {edge} contracted (eps={eps:+d})")
    print(f"index {log.start_index} -> {log.end_index} (target {log.target_index}); "
          f"delta sign {log.delta_sign:+d} throughout")
    _emit(log.to_dict(), args.json)
    return EXIT_OK if log.consistent else EXIT_MISMATCH


def cmd_render(args):
    C = load_config(args.config)
    if isinstance(C, PlanarPolygon):
        raise ValueError("render needs a cyclic configuration or a decorated polygon (with xi)")
    if isinstance(C, SpatialPolygon):
        C = DecoratedConfig(C, np.array([0.0, 0.0, 1.0]))
    out = args.out or _svg_path(args, "render.svg") or "render.svg"
    index = None
    if isinstance(C, CyclicConfig):
        try:
            index = planar_index(C)
        except PolymorseError:
            pass
    render_svg(C, out, index=index)
    print(out)
    return EXIT_OK


def cmd_suite(args):
    L = Linkage.parse(args.lengths)
    svg = _svg_path(args, "") if args.svg else None
    doc, code = run_suite(L, trials=args.trials, seed=args.seed,
                          tol=_tol(args, TAU_EIG_REL), svg_dir=svg)
    s = doc.get("summary")
    if s:
        print(f"{s['critical_points']} critical points ({s['planar']} planar, {s['zigzag']} zig-zag, "
              f"{s['nonplanar']} non-planar); histogram {doc['morse']['histogram']}; "
              f"verdict {s['verdict']}")
        print("checks: " + ", ".join(f"{k}={v}" for k, v in doc["checks"].items()))
    else:
        print(doc.get("error", "failed"))
    _emit(doc, args.json)
    return code


# -- parser ----------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON document here ('-' = stdout)")
    common.add_argument("--svg", metavar="DIR", help="write SVG drawings into this directory")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--tol", type=float, default=None, help="relative eigenvalue / SW tolerance")
    common.add_argument("--trials", type=int, default=2000)

    p = argparse.ArgumentParser(prog="polymorse", parents=[common],
                                description="Morse theory of area functions on polygon spaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(func=fn)
        return s

    s = add("cyclic", cmd_cyclic, "enumerate cyclic configurations")
    s.add_argument("--lengths", required=True)
    s.add_argument("--allow-central", action="store_true")
    s = add("morse", cmd_morse, "closed-form (and numeric) Morse indices")
    s.add_argument("--lengths", required=True)
    s.add_argument("--numeric", action="store_true")
    s = add("swap", cmd_swap, "apply one swap map s_i")
    s.add_argument("--config", required=True)
    s.add_argument("--vertex", type=int, required=True)
    s = add("sw", cmd_sw, "apply the SW map and test invariance")
    s.add_argument("--config", required=True)
    s = add("find-critical", cmd_find, "multistart search for critical points of S")
    s.add_argument("--lengths", required=True)
    s = add("zigzag", cmd_zigzag, "zig-zag critical points (even n)")
    s.add_argument("--lengths", required=True)
    s = add("betti", cmd_betti, "Betti numbers of the base and decorated spaces")
    s.add_argument("--lengths", required=True)
    s = add("verify-perfect", cmd_verify, "certify S as a perfect Morse function")
    s.add_argument("--lengths", required=True)
    s = add("deform", cmd_deform, "trace a cyclic deformation")
    s.add_argument("--from", dest="source")
    s.add_argument("--to", dest="target")
    s.add_argument("--contract", help="1-based edges of the start polygon to contract")
    s.add_argument("--times", help="contraction times in (0, 1]")
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--preset", choices=["heptagon-pentagram"])
    s = add("render", cmd_render, "draw a configuration as SVG")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s = add("suite", cmd_suite, "run the full pipeline on one linkage")
    s.add_argument("--lengths", required=True)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GenericityError as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return EXIT_GENERIC
    except (NumericError, DeformationError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PolymorseError, ValueError, OSError) as exc:
        if isinstance(exc, OddN):
            print(f"zig-zags need an even number of edges: {exc}", file=sys.stderr)
        else:
            print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
