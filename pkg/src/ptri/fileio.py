"""ptri-1 / ptri2-1 JSON file formats.

ptri-1 (3-complexes):
    {"format": "ptri-1", "mode": "vertex" | "gluing",
     "tetrahedra": [[l0, l1, l2, l3], ...],          # vertex labels
     "gluings": [[t, f, t2, f2, [p0, p1, p2]], ...],  # gluing mode only
     "edge_identifications": [[[t, e], [t2, e2]], ...]}  # optional

In vertex mode only "tetrahedra" is read; the complex is simplicial and
gluings are inferred from shared triples. In gluing mode "tetrahedra" is
optional (slots anonymous if omitted) and labels, when present, identify
vertices beyond the gluing orbits. "edge_identifications" (gluing mode)
identifies tet-edges beyond the gluing orbits; edge i of a tetrahedron is the
slot pair ((0,1),(0,2),(0,3),(1,2),(1,3),(2,3))[i]. Writing always uses
gluing mode with labels, which is lossless.

ptri2-1 (2-complexes): {"format": "ptri2-1", "mode": "vertex",
"triangles": [[a, b, c], ...]} plus a gluing-mode analog with
"gluings": [[t, e, t2, e2, [p0, p1]], ...].
"""
from __future__ import annotations

import json
from typing import Union

from .errors import FormatError
from .surface import Tri2Complex
from .tri_core import Triangulation


def triangulation_to_dict(t: Triangulation) -> dict:
    out = {
        "format": "ptri-1",
        "mode": "gluing",
        "tetrahedra": [list(row) for row in t.labels_by_tet()],
        "gluings": [
            [a, b, c, d, list(p)] for (a, b, c, d, p) in t.gluings_list()
        ],
    }
    ids = t.extra_edge_identifications()
    if ids:
        out["edge_identifications"] = [
            [list(a), list(b)] for (a, b) in ids
        ]
    return out


def triangulation_from_dict(data: dict) -> Triangulation:
    if not isinstance(data, dict) or data.get("format") != "ptri-1":
        raise FormatError("not a ptri-1 document")
    mode = data.get("mode", "vertex")
    if mode == "vertex":
        tets = data.get("tetrahedra")
        if not tets:
            raise FormatError("vertex mode requires a tetrahedra list")
        return Triangulation.from_vertex_tuples(tets)
    if mode != "gluing":
        raise FormatError(f"unknown mode {mode!r}")
    gluings = [
        (int(t), int(f), int(t2), int(f2), tuple(int(x) for x in perm))
        for t, f, t2, f2, perm in data.get("gluings", [])
    ]
    tets = data.get("tetrahedra")
    if tets is not None:
        n = len(tets)
    else:
        n = int(data.get("tetrahedra_count", 0))
        if n == 0 and gluings:
            n = 1 + max(max(g[0], g[2]) for g in gluings)
    merges = [
        (tuple(a), tuple(b)) for a, b in data.get("edge_identifications", [])
    ]
    return Triangulation(n, gluings, labels=tets, edge_merges=merges)


def surface_to_dict(s: Tri2Complex) -> dict:
    return {
        "format": "ptri2-1",
        "mode": "gluing",
        "triangles": [
            [s.vertex_labels[s.corner_class(t, c)] for c in range(3)]
            for t in range(s.n)
        ],
        "gluings": [
            [t, e, t2, e2, list(perm)]
            for (t, e), (t2, e2, perm) in sorted(s._glue.items())
            if (t, e) < (t2, e2)
        ],
    }


def surface_from_dict(data: dict) -> Tri2Complex:
    if not isinstance(data, dict) or data.get("format") != "ptri2-1":
        raise FormatError("not a ptri2-1 document")
    mode = data.get("mode", "vertex")
    tris = data.get("triangles")
    if mode == "vertex":
        if not tris:
            raise FormatError("vertex mode requires a triangles list")
        return Tri2Complex.from_triangle_tuples(tris)
    if mode != "gluing":
        raise FormatError(f"unknown mode {mode!r}")
    gluings = [
        (int(t), int(e), int(t2), int(e2), tuple(int(x) for x in perm))
        for t, e, t2, e2, perm in data.get("gluings", [])
    ]
    n = len(tris) if tris else (1 + max(max(g[0], g[2]) for g in gluings) if gluings else 0)
    return Tri2Complex(n, gluings, corner_labels=tris)


def load(path: str) -> Union[Triangulation, Tri2Complex]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    fmt = data.get("format") if isinstance(data, dict) else None
    if fmt == "ptri-1":
        return triangulation_from_dict(data)
    if fmt == "ptri2-1":
        return surface_from_dict(data)
    raise FormatError(f"unknown format {fmt!r} in {path}")


def save(obj: Union[Triangulation, Tri2Complex], path: str) -> None:
    if isinstance(obj, Triangulation):
        data = triangulation_to_dict(obj)
    elif isinstance(obj, Tri2Complex):
        data = surface_to_dict(obj)
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")
