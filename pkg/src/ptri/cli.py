"""Command-line front end.

Subcommands: validate, analyze, invariant, walk, algebra, example, cone,
pinch, suspend, mapcyl. Exit codes: 0 success, 1 domain error (JSON error
object on stderr under --json), 2 usage error. All subcommands are
deterministic for fixed flags; PTV_LOG sets the log level.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import fileio
from .errors import PtriError
from .quantum_algebra import QuantumParams, verify_pentagon
from .surface import Tri2Complex
from .tri_core import Triangulation

log = logging.getLogger("ptri")


def _complex_pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _load_3d(path: str) -> Triangulation:
    obj = fileio.load(path)
    if not isinstance(obj, Triangulation):
        raise PtriError(f"{path} holds a 2-complex; a ptri-1 file is required")
    return obj


def _load_2d(path: str) -> Tri2Complex:
    obj = fileio.load(path)
    if not isinstance(obj, Tri2Complex):
        raise PtriError(f"{path} holds a 3-complex; a ptri2-1 file is required")
    return obj


def _cmd_validate(args) -> int:
    from .pseudo_analysis import validate

    t = _load_3d(args.file)
    res = validate(t)
    v, e, f, n = t.counts()
    if args.json:
        print(json.dumps({
            "status": res.status.value,
            "reason": res.reason,
            "counts": {"vertices": v, "edges": e, "faces": f, "tetrahedra": n},
        }))
    else:
        human = {
            "closedPseudomanifold": "closed pseudomanifold",
            "pseudomanifoldWithBoundary": "pseudomanifold with boundary",
            "invalid": f"invalid ({res.reason})",
        }[res.status.value]
        print(f"{human}: {n} tetrahedra, {f} faces, {e} edges, {v} vertices")
    return 0


def _cmd_analyze(args) -> int:
    from .pseudo_analysis import skeletons

    t = _load_3d(args.file)
    rep = skeletons(t)
    gamma = rep.gamma
    if args.json:
        arcs = [
            {
                "endpoints": list(a.ends) if a.ends is not None else None,
                "interiorVertices": list(a.interior),
                "edges": a.edge_count,
                "k": a.k,
            }
            for a in gamma.arcs
        ]
        print(json.dumps({
            "x0": sorted(t.vertex_labels[v] for v in rep.x0_vertices),
            "x1_vertices": sorted(t.vertex_labels[v] for v in rep.x1_vertices),
            "x1_edges": [
                {
                    "endpoints": sorted(t.vertex_labels[v] for v in t.edge_endpoints(e)),
                    "circles": rep.edge_circles[e],
                }
                for e in rep.x1_edges
            ],
            "gamma": {"nodes": list(gamma.x0_labels), "arcs": arcs},
        }))
    else:
        print(f"X(0) vertices: {', '.join(rep.x0_labels(t)) or '(none)'}")
        x1v = sorted(t.vertex_labels[v] for v in rep.x1_vertices)
        print(f"X(1) vertices: {', '.join(x1v) or '(none)'}")
        if rep.x1_edges:
            for e in rep.x1_edges:
                ends = "–".join(sorted(t.vertex_labels[v] for v in t.edge_endpoints(e)))
                print(f"  singular edge {ends}: {rep.edge_circles[e]} link circles")
        else:
            print("X(1) edges: (none)")
        for a in gamma.arcs:
            kind = "circle" if a.ends is None else f"arc {a.ends[0]}..{a.ends[1]}"
            print(f"  gamma {kind}: {a.edge_count} edges, k={a.k}, interior={list(a.interior)}")
    return 0


def _cmd_invariant(args) -> int:
    from .statesum import state_sum

    t = _load_3d(args.file)
    p = QuantumParams(args.r, args.root, args.tol)
    res = state_sum(t, p, jobs=args.jobs)
    if args.json:
        print(json.dumps({
            "value": _complex_pair(res.value),
            "a": res.vertex_count,
            "edges": res.edge_count,
            "colorings": res.colorings_admissible,
            "pruned": res.branches_pruned,
            "visited": res.branches_visited,
            "r": res.r,
            "root": res.root_exponent,
            "wallTime": res.wall_time,
        }))
    else:
        print(f"|X| at r={args.r}, c={args.root}: {res.value:.12g}")
        print(
            f"  vertices a={res.vertex_count}, admissible colorings "
            f"{res.colorings_admissible}, pruned {res.branches_pruned}, "
            f"{res.wall_time:.3f}s"
        )
    return 0


def _cmd_walk(args) -> int:
    from .moves import random_walk
    from .pseudo_analysis import same_gamma_class, skeletons
    from .statesum import state_sum

    t = _load_3d(args.file)
    weights = None
    if args.weights:
        weights = {}
        for part in args.weights.split(","):
            kind, _, wt = part.partition("=")
            weights[kind.strip()] = float(wt)
    check = args.check_invariant
    p = QuantumParams(args.r, args.root, args.tol) if check else None
    base = state_sum(t, p).value if check else None
    rep0 = skeletons(t) if check else None

    rows = []

    def snapshot(i, cur):
        v, e, f, n = cur.counts()
        rows.append((i, cur, n, e))

    final, trace = random_walk(t, args.steps, args.seed, weights=weights, snapshot=snapshot)
    worst = 0.0
    for (i, cur, n, e), mv in zip(rows, trace):
        entry = {"step": i, "kind": mv.kind, "target": mv.target, "tets": n, "edges": e}
        if check:
            val = state_sum(cur, p).value
            dev = abs(val - base) / max(abs(base), 1.0)
            worst = max(worst, dev)
            entry["value"] = _complex_pair(val)
            entry["gammaPreserved"] = same_gamma_class(rep0, skeletons(cur))
        print(json.dumps(entry))
    if check:
        log.info("max relative deviation %.3e", worst)
    if args.out:
        fileio.save(final, args.out)
    return 0


def _cmd_algebra(args) -> int:
    p = QuantumParams(args.r, args.root, args.tol)
    if args.what == "table":
        data = {
            "r": p.r,
            "root": p.root_exponent,
            "colors": list(p.colors),
            "qdim": [_complex_pair(p.qdim(i)) for i in p.colors],
            "rank_squared": _complex_pair(p.rank_squared()),
        }
        if args.json:
            print(json.dumps(data))
        else:
            print(f"r={p.r} c={p.root_exponent}: colors {list(p.colors)}")
            for i in p.colors:
                print(f"  qdim({i}) = {p.qdim(i):.12g}")
            print(f"  rank^2 = {p.rank_squared():.12g}")
        return 0
    # identity suite
    s = sum(p.qdim(i) ** 2 for i in p.colors)
    rank_dev = abs(p.rank_squared() - s)
    pent = verify_pentagon(p, samples=50, seed=7)
    ok = rank_dev < p.tol and pent.max_deviation < p.tol
    data = {
        "rankIdentityDeviation": rank_dev,
        "pentagonSamples": pent.samples,
        "pentagonDeviation": pent.max_deviation,
        "ok": ok,
    }
    if args.json:
        print(json.dumps(data))
    else:
        print(f"rank^2 identity deviation: {rank_dev:.3e}")
        print(f"pentagon identity over {pent.samples} samples: {pent.max_deviation:.3e}")
        print("OK" if ok else "FAILED")
    return 0 if ok else 1


def _cmd_example(args) -> int:
    from .constructions import example

    obj = example(args.name)
    fileio.save(obj, args.out)
    log.info("wrote %s", args.out)
    return 0


def _parse_groups(text: str):
    return [
        [x.strip() for x in part.split(",") if x.strip()]
        for part in text.split(";")
        if part.strip()
    ]


def _cmd_cone(args) -> int:
    from .constructions import cone_boundary

    t = _load_3d(args.file)
    partition = [[int(x) for x in grp] for grp in _parse_groups(args.groups)]
    fileio.save(cone_boundary(t, partition), args.out)
    return 0


def _cmd_pinch(args) -> int:
    from .constructions import identify_vertices

    t = _load_3d(args.file)
    fileio.save(identify_vertices(t, _parse_groups(args.groups)), args.out)
    return 0


def _cmd_suspend(args) -> int:
    from .constructions import suspension

    s = _load_2d(args.file)
    fileio.save(suspension(s), args.out)
    return 0


def _cmd_mapcyl(args) -> int:
    from .constructions import mapping_cylinder_attach

    t = _load_3d(args.file)
    fileio.save(
        mapping_cylinder_attach(t, component=args.component, k=args.k, m=args.m),
        args.out,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ptri",
        description="Triangulated 3-pseudomanifolds: skeletons, moves, and state sums",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_quantum(sp):
        sp.add_argument("--r", type=int, default=3, help="level r >= 2")
        sp.add_argument("--root", type=int, default=1, help="root exponent, coprime to 4r")
        sp.add_argument("--tol", type=float, default=1e-9)

    sp = sub.add_parser("validate", help="pseudomanifold status of a ptri-1 file")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=_cmd_validate)

    sp = sub.add_parser("analyze", help="natural skeletons and Gamma-signature")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=_cmd_analyze)

    sp = sub.add_parser("invariant", help="evaluate the state sum")
    sp.add_argument("file")
    add_quantum(sp)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=_cmd_invariant)

    sp = sub.add_parser("walk", help="random bistellar walk, trace as JSON lines")
    sp.add_argument("file")
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--weights", help="kind=weight list, e.g. m14=1,m32=5")
    sp.add_argument("--check-invariant", action="store_true")
    add_quantum(sp)
    sp.add_argument("-o", "--out", help="write the final triangulation here")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=_cmd_walk)

    sp = sub.add_parser("algebra", help="quantum data tables and identity checks")
    add_quantum(sp)
    sp.add_argument("what", choices=("table", "check"))
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=_cmd_algebra)

    sp = sub.add_parser("example", help="write a named example complex")
    sp.add_argument("name")
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(fn=_cmd_example)

    sp = sub.add_parser("cone", help="cone boundary components by partition")
    sp.add_argument("file")
    sp.add_argument("--groups", required=True, help='e.g. "0;1,2"')
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(fn=_cmd_cone)

    sp = sub.add_parser("pinch", help="identify vertices by label groups")
    sp.add_argument("file")
    sp.add_argument("--groups", required=True, help='e.g. "v0,v5"')
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(fn=_cmd_pinch)

    sp = sub.add_parser("suspend", help="suspension of a closed ptri2-1 surface")
    sp.add_argument("file")
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(fn=_cmd_suspend)

    sp = sub.add_parser("mapcyl", help="attach a torus-to-circle mapping cylinder")
    sp.add_argument("file")
    sp.add_argument("--component", type=int, default=0)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("-o", "--out", required=True)
    sp.set_defaults(fn=_cmd_mapcyl)

    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("PTV_LOG", "WARNING").upper())
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except PtriError as exc:
        if getattr(args, "json", False):
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
