"""Pseudomanifold constructions: cones, quotients, suspensions, mapping
cylinders, and the seed example library.

The mapping-cylinder attachment works against a standard grid model of the
boundary torus: columns 0..K-1, rows Z_p, where strips 0..K-2 carry rising
diagonals (g(i,j) -- g(i+1,j+1)) and the wrap strip between columns K-1 and 0
carries the diagonal (g(0,j) -- g(K-1,j+1)). This is exactly the pattern the
prism-product machinery produces when vertex classes ascend around the
circle, so product-built solid tori and collars match the generator on the
nose; anything else is matched by canonical isomorphism search or rejected.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    GridIncompatible,
    NotBoundary,
    NotClosedSurfaceComplex,
    NotTorusBoundary,
    PartitionInvalid,
    UnknownExample,
)
from .surface import EDGE_CORNERS, Tri2Complex, UnionFind, product_with_circle
from .tri_core import EDGE_PAIRS, FACE_VERTS, Triangulation, disjoint_union


# --- small 2-complex seeds -----------------------------------------------

def sphere_bd_tet() -> Tri2Complex:
    """Boundary of the 3-simplex: the 4-triangle sphere."""
    return Tri2Complex.from_triangle_tuples(
        [(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)]
    )


def torus7() -> Tri2Complex:
    """The 7-vertex triangulated torus (every pair of vertices is an edge)."""
    tris = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
    tris += [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    return Tri2Complex.from_triangle_tuples(tris)


def disk_fan(n: int) -> Tri2Complex:
    """An n-gon disk triangulated as a fan from vertex 0 (no interior vertex)."""
    if n < 3:
        raise ValueError("disk needs at least 3 boundary vertices")
    tris = [(f"d0", f"d{i}", f"d{i+1}") for i in range(1, n - 1)]
    return Tri2Complex.from_triangle_tuples(tris)


def interp_annulus(k_in: int, k_out: int) -> Tri2Complex:
    """Annulus between a k_in-gon (labels x*) and a k_out-gon (labels y*).

    Triangulated by the merge walk: consecutive triangles share a crossing
    edge, inner and outer edges stay unglued.
    """
    if k_in < 2 or k_out < 2:
        raise ValueError("annulus interpolation needs at least 2 vertices per circle")
    tris = []
    kinds = []
    i = j = 0
    while i < k_in or j < k_out:
        if j >= k_out or (
            i < k_in and Fraction(i + 1, k_in) <= Fraction(j + 1, k_out)
        ):
            tris.append((f"x{i}", f"x{(i + 1) % k_in}", f"y{j % k_out}"))
            kinds.append("in")
            i += 1
        else:
            tris.append((f"x{i % k_in}", f"y{j}", f"y{(j + 1) % k_out}"))
            kinds.append("out")
            j += 1
    n = len(tris)
    gluings = []
    for a in range(n):
        b = (a + 1) % n
        # shared crossing edge: the pair of labels common to both triangles
        shared = set(tris[a]) & set(tris[b])
        ea = next(e for e in range(3) if tris[a][e] not in shared)
        eb = next(e for e in range(3) if tris[b][e] not in shared)
        src = [tris[a][c] for c in EDGE_CORNERS[ea]]
        dst = [tris[b][c] for c in EDGE_CORNERS[eb]]
        perm = tuple(dst.index(x) for x in src)
        gluings.append((a, ea, b, eb, perm))
    return Tri2Complex(n, gluings, corner_labels=tris)


# --- the standard grid torus ------------------------------------------------


def _grid_triangles(K: int, p: int):
    """Corner-label tuples of the standard grid, indexed 2*(i*p+j)+ty.

    Rising strips i <= K-2: ty 0 = (g(i,j), g(i+1,j), g(i+1,j+1)),
                            ty 1 = (g(i,j), g(i,j+1), g(i+1,j+1));
    wrap strip i = K-1:     ty 0 = (g(K-1,j), g(0,j), g(K-1,j+1)),
                            ty 1 = (g(0,j), g(K-1,j+1), g(0,j+1)).
    """
    def g(i, j):
        return (i % K, j % p)

    tris = []
    for i in range(K):
        for j in range(p):
            if i < K - 1:
                tris.append((g(i, j), g(i + 1, j), g(i + 1, j + 1)))
                tris.append((g(i, j), g(i, j + 1), g(i + 1, j + 1)))
            else:
                tris.append((g(K - 1, j), g(0, j), g(K - 1, j + 1)))
                tris.append((g(0, j), g(K - 1, j + 1), g(0, j + 1)))
    return tris


def grid_torus(K: int, p: int) -> Tri2Complex:
    """The standard (K x p)-grid torus (explicit gluings, so p = 2 works)."""
    if K < 2 or p < 2:
        raise ValueError("grid torus needs K >= 2 and p >= 2")
    tris = _grid_triangles(K, p)

    def tri(i, j, ty):
        return 2 * ((i % K) * p + (j % p)) + ty

    gluings = []

    def glue(ta, tb, shared):
        ea = next(e for e in range(3) if tris[ta][e] not in shared)
        eb = next(e for e in range(3) if tris[tb][e] not in shared)
        src = [tris[ta][c] for c in EDGE_CORNERS[ea]]
        dst = [tris[tb][c] for c in EDGE_CORNERS[eb]]
        perm = tuple(dst.index(x) for x in src)
        gluings.append((ta, ea, tb, eb, perm))

    def g(i, j):
        return (i % K, j % p)

    for i in range(K):
        for j in range(p):
            if i < K - 1:
                glue(tri(i, j, 0), tri(i, j, 1), {g(i, j), g(i + 1, j + 1)})
                glue(tri(i, j, 0), tri(i, j - 1, 1), {g(i, j), g(i + 1, j)})
                left = tri(i - 1, j, 0) if i >= 1 else tri(K - 1, j, 1)
                glue(tri(i, j, 1), left, {g(i, j), g(i, j + 1)})
            else:
                glue(tri(i, j, 0), tri(i, j, 1), {g(0, j), g(K - 1, j + 1)})
                glue(tri(i, j, 0), tri(i, j - 1, 1), {g(K - 1, j), g(0, j)})
                glue(tri(i, j, 0), tri(K - 2, j, 0), {g(K - 1, j), g(K - 1, j + 1)})
    labels = [tuple(f"g{i}_{j}" for (i, j) in row) for row in tris]
    return Tri2Complex(len(tris), gluings, corner_labels=labels)


# --- boundary components ------------------------------------------------------


@dataclass(frozen=True)
class BoundaryComponent:
    triangles: tuple[int, ...]
    orientable: bool
    euler_characteristic: int
    pinch_points: int


@dataclass(frozen=True)
class BoundaryComponentMap:
    surface: Tri2Complex
    faces: tuple[tuple[int, int], ...]
    components: tuple[BoundaryComponent, ...]


def boundary_component_map(t: Triangulation) -> BoundaryComponentMap:
    """Boundary components (connected through vertices) with classification."""
    if not t.boundary_faces:
        raise NotBoundary("complex has no boundary")
    surf, faces = t.boundary_complex()
    uf = UnionFind(surf.n)
    by_class: dict[int, int] = {}
    for tri in range(surf.n):
        for c in range(3):
            ci = surf.corner_class(tri, c)
            if ci in by_class:
                uf.union(by_class[ci], tri)
            else:
                by_class[ci] = tri
        for e in range(3):
            g = surf.gluing(tri, e)
            if g is not None:
                uf.union(tri, g[0])
    groups: dict[int, list[int]] = {}
    for tri in range(surf.n):
        groups.setdefault(uf.find(tri), []).append(tri)
    orient = surf.orientable_components()
    comps = []
    for rep in sorted(groups):
        tris = tuple(sorted(groups[rep]))
        cset = {surf.corner_class(tr, c) for tr in tris for c in range(3)}
        eset = {surf.edge_class(tr, e) for tr in tris for e in range(3)}
        chi = len(cset) - len(eset) + len(tris)
        ok = all(orient[surf.component_of_triangle(tr)] for tr in tris)
        pinch = sum(1 for ci in cset if len(surf.corner_link(ci)) > 1)
        comps.append(BoundaryComponent(tris, ok, chi, pinch))
    return BoundaryComponentMap(surf, tuple(faces), tuple(comps))


def _fresh_label(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def cone_boundary(t: Triangulation, partition: Sequence[Sequence[int]]) -> Triangulation:
    """Cone the boundary, one new apex per group of boundary components.

    Every boundary triangle spawns a tetrahedron coning it to its group's
    apex; side faces are glued following the boundary's own edge pairing, and
    cone edges over pinched boundary vertices are identified explicitly.
    """
    bmap = boundary_component_map(t)
    seen: list[int] = []
    for group in partition:
        seen.extend(group)
    if sorted(seen) != list(range(len(bmap.components))):
        raise PartitionInvalid(
            f"partition {partition!r} must cover components 0..{len(bmap.components)-1} once"
        )
    surf, faces = bmap.surface, bmap.faces
    taken = set(t.vertex_labels)
    n_old = t.n_tets
    gluings = [tuple(x) for x in t.gluings_list()]
    labels = [list(row) for row in t.labels_by_tet()]
    merges = t.extra_edge_identifications()
    new_index = {}
    for gi, group in enumerate(partition):
        apex = _fresh_label(f"apex{gi}", taken)
        tris = [tr for ci in group for tr in bmap.components[ci].triangles]
        for tr in sorted(tris):
            tet, f = faces[tr]
            idx = n_old + len(new_index)
            new_index[tr] = idx
            row = [apex] + [t.label_of_slot(tet, s) for s in FACE_VERTS[f]]
            labels.append(row)
            gluings.append((idx, 0, tet, f, (0, 1, 2)))
        for tr in sorted(tris):
            for e in range(3):
                g = surf.gluing(tr, e)
                if g is None:
                    raise NotClosedSurfaceComplex("boundary surface is not closed")
                tr2, e2, perm = g
                if (tr2, e2) < (tr, e):
                    continue
                gluings.append(
                    (
                        new_index[tr],
                        1 + e,
                        new_index[tr2],
                        1 + e2,
                        (0, 1 + perm[0], 1 + perm[1]),
                    )
                )
        # pinched boundary vertices: identify the cone edges of all circles
        cset = {surf.corner_class(tr, c) for tr in tris for c in range(3)}
        for ci in sorted(cset):
            arcs = surf.corner_link(ci)
            if len(arcs) <= 1:
                continue
            reps = []
            for arc in arcs:
                tr, c = arc.steps[0]
                reps.append((new_index[tr], c))  # tet-edge (0, 1+c) has index c
            for other in reps[1:]:
                merges.append((reps[0], other))
    return Triangulation(n_old + len(new_index), gluings, labels=labels, edge_merges=merges)


def identify_vertices(t: Triangulation, groups: Iterable[Sequence[object]]) -> Triangulation:
    """Identify the vertices within each group (pure relabeling)."""
    groups = [list(map(str, g)) for g in groups]
    flat = [x for g in groups for x in g]
    if len(set(flat)) != len(flat):
        raise ValueError("identification groups must be disjoint")
    rename: dict[str, str] = {}
    for g in groups:
        if not g:
            continue
        target = min(g)
        for lbl in g:
            t.vertex_class_by_label(lbl)  # raises KeyError for unknown labels
            rename[lbl] = target
    labels = [
        [rename.get(lbl, lbl) for lbl in row] for row in t.labels_by_tet()
    ]
    return Triangulation(
        t.n_tets,
        t.gluings_list(),
        labels=labels,
        edge_merges=t.extra_edge_identifications(),
    )


def suspension(s: Tri2Complex) -> Triangulation:
    """Two cones over a closed surface complex, glued along it.

    Each triangle spawns a north and a south tetrahedron sharing their base;
    apex links are copies of the surface.
    """
    if not s.is_closed:
        raise NotClosedSurfaceComplex("suspension needs a closed 2-complex")
    taken = set(s.vertex_labels)
    north = _fresh_label("N", taken)
    south = _fresh_label("S", taken)
    gluings = []
    labels = []
    merges = []
    for tr in range(s.n):
        row = [s.vertex_labels[s.corner_class(tr, c)] for c in range(3)]
        labels.append([north] + row)
        labels.append([south] + row)
        gluings.append((2 * tr, 0, 2 * tr + 1, 0, (0, 1, 2)))
    for tr in range(s.n):
        for e in range(3):
            g = s.gluing(tr, e)
            if g is None:
                continue
            tr2, e2, perm = g
            if (tr2, e2) < (tr, e):
                continue
            lifted = (0, 1 + perm[0], 1 + perm[1])
            gluings.append((2 * tr, 1 + e, 2 * tr2, 1 + e2, lifted))
            gluings.append((2 * tr + 1, 1 + e, 2 * tr2 + 1, 1 + e2, lifted))
    for ci in range(len(s.corner_classes)):
        arcs = s.corner_link(ci)
        if len(arcs) <= 1:
            continue
        for parity in (0, 1):
            reps = [(2 * arc.steps[0][0] + parity, arc.steps[0][1]) for arc in arcs]
            for other in reps[1:]:
                merges.append((reps[0], other))
    return Triangulation(2 * s.n, gluings, labels=labels, edge_merges=merges)


def solid_torus(K: int = 6, p: int = 2) -> Triangulation:
    """A triangulated solid torus whose boundary is the standard K x p grid."""
    return product_with_circle(disk_fan(K), p)


# --- grid detection and the mapping cylinder ----------------------------------


def _subsurface(surf: Tri2Complex, tris: Sequence[int]):
    index = {tr: i for i, tr in enumerate(sorted(tris))}
    gluings = []
    for tr in index:
        for e in range(3):
            g = surf.gluing(tr, e)
            if g is not None:
                tr2, e2, perm = g
                if (tr2, e2) < (tr, e):
                    continue
                gluings.append((index[tr], e, index[tr2], e2, perm))
    labels = [
        [f"c{surf.corner_class(tr, c)}" for c in range(3)]
        for tr in sorted(tris)
    ]
    sub = Tri2Complex(len(index), gluings, corner_labels=labels)
    back = sorted(tris)
    return sub, back


def _is_torus(sub: Tri2Complex) -> bool:
    if not sub.is_closed or sub.n_components != 1:
        return False
    if not all(sub.orientable_components()):
        return False
    if sub.euler_characteristic() != 0:
        return False
    return all(len(sub.corner_link(ci)) == 1 for ci in range(len(sub.corner_classes)))


def detect_grid(sub: Tri2Complex, km: int):
    """Match a torus against standard grids, preferring K == km.

    Returns (K, p, iso) with iso mapping each grid triangle index to
    (sub triangle, corner map). Raises GridIncompatible when no candidate
    factorization matches.
    """
    V = len(sub.corner_classes)
    cands = []
    for K in range(2, V // 2 + 1):
        if V % K == 0 and V // K >= 2:
            cands.append((K, V // K))
    cands.sort(key=lambda kp: (kp[0] != km, abs(kp[0] - km), kp[0]))
    for K, p in cands:
        grid = grid_torus(K, p)
        iso = grid.find_isomorphism(sub)
        if iso is not None:
            return K, p, iso
    raise GridIncompatible(
        f"boundary torus with {V} vertices does not match any grid model"
    )


def _glue_boundary_pieces(t1, faces1, t2, faces2, tri_map, prefix="+"):
    """Glue complex t2 onto t1 along matched boundary triangles.

    tri_map: index into faces1 -> (index into faces2, corner map). Boundary
    triangle corners are FACE_VERTS of the face, ascending, so a corner map is
    already a gluing permutation.
    """
    off = t1.n_tets
    gluings = [tuple(x) for x in t1.gluings_list()]
    gluings += [
        (a + off, f, b + off, f2, perm) for (a, f, b, f2, perm) in t2.gluings_list()
    ]
    for i, (j, cmap) in tri_map.items():
        tet1, f1 = faces1[i]
        tet2, f2 = faces2[j]
        gluings.append((tet1, f1, tet2 + off, f2, tuple(cmap)))
    labels = [list(row) for row in t1.labels_by_tet()]
    labels += [[f"{prefix}{x}" for x in row] for row in t2.labels_by_tet()]
    merges = t1.extra_edge_identifications() + [
        ((a[0] + off, a[1]), (b[0] + off, b[1]))
        for a, b in t2.extra_edge_identifications()
    ]
    return Triangulation(t1.n_tets + t2.n_tets, gluings, labels=labels, edge_merges=merges)


def _collapse_layer(base: Triangulation, K: int, p: int, m: int, faces, iso, glabels):
    """Attach the torus -> circle collapse onto the detected grid boundary.

    Per square four tetrahedra; tokens are either ('g', i, j) grid vertices or
    ('u', a) target vertices, and each gluing is derived by matching tokens on
    an explicitly named shared face.
    """
    k = K // m
    n_old = base.n_tets
    gluings = [tuple(x) for x in base.gluings_list()]
    labels = [list(row) for row in base.labels_by_tet()]
    merges = base.extra_edge_identifications()
    taken = set(base.vertex_labels)
    ulab = [_fresh_label(f"u{a}", taken) for a in range(m)]

    def G(i, j):
        return ("g", i % K, j % p)

    def U(i):
        return ("u", i % m)

    def toks(i, j, which):
        i = i % K
        u, v = U(i), U(i + 1)
        if i < K - 1:
            table = {
                "ML1": (G(i, j), G(i + 1, j), G(i + 1, j + 1), v),
                "ML2": (G(i, j), G(i + 1, j + 1), v, u),
                "FH1": (G(i, j), G(i, j + 1), G(i + 1, j + 1), u),
                "FH2": (G(i, j + 1), G(i + 1, j + 1), u, v),
            }
        else:
            table = {
                "ML1": (G(K - 1, j), G(K - 1, j + 1), G(0, j), u),    # W1
                "ML2": (G(K - 1, j), G(0, j), u, v),                  # W2
                "FH1": (G(K - 1, j + 1), G(0, j), G(0, j + 1), v),    # M1
                "FH2": (G(K - 1, j + 1), G(0, j), v, u),              # M2
            }
        return table[which]

    KIND = ("ML1", "ML2", "FH1", "FH2")

    def tet(i, j, which):
        return n_old + 4 * ((i % K) * p + (j % p)) + KIND.index(which)

    def label_of(token):
        if token[0] == "u":
            return ulab[token[1]]
        return glabels[(token[1], token[2])]

    for i in range(K):
        for j in range(p):
            for which in KIND:
                labels.append([label_of(tok) for tok in toks(i, j, which)])

    def glue(spec_a, spec_b, face_tokens):
        (ia, ja, wa), (ib, jb, wb) = spec_a, spec_b
        ta, tb = tet(ia, ja, wa), tet(ib, jb, wb)
        ka, kb = toks(ia, ja, wa), toks(ib, jb, wb)
        want = set(face_tokens)
        fa = next(s for s in range(4) if ka[s] not in want)
        fb = next(s for s in range(4) if kb[s] not in want)
        sa = [s for s in range(4) if s != fa]
        sb = [s for s in range(4) if s != fb]
        where = {kb[s]: idx for idx, s in enumerate(sb)}
        perm = tuple(where[ka[s]] for s in sa)
        gluings.append((ta, fa, tb, fb, perm))

    # bottom gluings: collapse tet slots 0..2 carry the grid triangle corners
    # in table order; map them through the generator's corner convention.
    BOTTOM_CORNERS = {
        ("rise", "ML1"): (0, 1, 2),
        ("rise", "FH1"): (0, 1, 2),
        ("wrap", "ML1"): (0, 2, 1),
        ("wrap", "FH1"): (1, 0, 2),
    }
    for i in range(K):
        kind = "rise" if i < K - 1 else "wrap"
        for j in range(p):
            for which, ty in (("ML1", 0), ("FH1", 1)):
                sub_tri, cmap = iso[2 * (i * p + j) + ty]
                tet2, f2 = faces[sub_tri]
                corner_of_slot = BOTTOM_CORNERS[(kind, which)]
                perm = tuple(cmap[corner_of_slot[s]] for s in range(3))
                gluings.append((tet(i, j, which), 3, tet2, f2, perm))

    for i in range(K):
        u, v = U(i), U(i + 1)
        rise = i < K - 1
        for j in range(p):
            if rise:
                glue((i, j, "ML1"), (i, j, "ML2"), (G(i, j), G(i + 1, j + 1), v))
                glue((i, j, "FH1"), (i, j, "FH2"), (G(i, j + 1), G(i + 1, j + 1), u))
                glue((i, j, "ML2"), (i, j, "FH1"), (G(i, j), G(i + 1, j + 1), u))
                glue((i, j, "ML2"), (i, j, "FH2"), (G(i + 1, j + 1), u, v))
                glue((i, j, "ML1"), (i, j - 1, "FH2"), (G(i, j), G(i + 1, j), v))
                glue((i, j, "ML2"), (i, j - 1, "FH2"), (G(i, j), u, v))
                nxt = "FH1" if i + 1 < K - 1 else "ML1"  # W1 plays FH1's role
                glue((i, j, "ML1"), (i + 1, j, nxt), (G(i + 1, j), G(i + 1, j + 1), v))
            else:
                glue((i, j, "ML1"), (i, j, "ML2"), (G(K - 1, j), G(0, j), u))
                glue((i, j, "FH1"), (i, j, "FH2"), (G(K - 1, j + 1), G(0, j), v))
                glue((i, j, "ML1"), (i, j, "FH2"), (G(K - 1, j + 1), G(0, j), u))
                glue((i, j, "ML2"), (i, j, "FH2"), (G(0, j), u, v))
                glue((i, j, "ML2"), (i, j - 1, "FH1"), (G(K - 1, j), G(0, j), v))
                glue((i, j, "ML2"), (i, j - 1, "FH2"), (G(K - 1, j), u, v))
                glue((i, j, "FH1"), (0, j, "FH1"), (G(0, j), G(0, j + 1), v))

    # singular core: fuse the k strip chains of each target edge
    for a in range(m):
        rep = (tet(a, 0, "ML2"), 5)  # tet-edge (2,3) holds (u, v)
        for w in range(1, k):
            merges.append((rep, (tet(a + w * m, 0, "ML2"), 5)))

    return Triangulation(n_old + 4 * K * p, gluings, labels=labels, edge_merges=merges)


def mapping_cylinder_attach(t: Triangulation, component: int = 0, k: int = 2, m: int = 3) -> Triangulation:
    """Attach the mapping cylinder of the degree-k torus-to-circle collapse.

    The chosen boundary component must be a torus carrying a grid
    triangulation; when its column count differs from k*m a product collar
    over an interpolation annulus is inserted first. The result is closed;
    for k >= 2 the target circle (m edges, k link circles each) is the
    singular set.
    """
    if k < 1 or m < 3 or k * m < 3:
        raise ValueError("need k >= 1 and m >= 3")
    bmap = boundary_component_map(t)
    if not (0 <= component < len(bmap.components)):
        raise NotBoundary(f"no boundary component {component}")
    comp = bmap.components[component]
    sub, back = _subsurface(bmap.surface, comp.triangles)
    if not _is_torus(sub):
        raise NotTorusBoundary("chosen boundary component is not a torus")
    faces = [bmap.faces[tr] for tr in back]
    K, p, iso = detect_grid(sub, k * m)
    base = t
    if K != k * m:
        collar = product_with_circle(interp_annulus(K, k * m), p)
        cb, cfaces = collar.boundary_complex()
        # split the collar boundary into inner (x-labels) and outer (y-labels)
        inner_tris, outer_tris = [], []
        for tr in range(cb.n):
            tet2, f2 = cfaces[tr]
            lbl = collar.label_of_slot(tet2, FACE_VERTS[f2][0])
            (inner_tris if lbl.startswith("x") else outer_tris).append(tr)
        inner_sub, inner_back = _subsurface(cb, inner_tris)
        K_i, p_i, iso_inner = detect_grid(inner_sub, K)
        if (K_i, p_i) != (K, p):
            raise GridIncompatible("collar inner boundary mismatch")
        # compose: t-boundary triangle -> collar inner triangle
        tri_map = {}
        for gidx in range(len(iso)):
            s_tri, s_map = iso[gidx]
            c_tri, c_map = iso_inner[gidx]
            inv = [0, 0, 0]
            for old, new in enumerate(s_map):
                inv[new] = old
            cmap = tuple(c_map[inv[c]] for c in range(3))
            tri_map[back[s_tri]] = (inner_back[c_tri], cmap)
        full_faces1 = bmap.faces
        base = _glue_boundary_pieces(
            t, full_faces1, collar, cfaces,
            {i: tri_map[i] for i in tri_map}, prefix="+",
        )
        bmap2 = boundary_component_map(base)
        target = None
        for ci2, comp2 in enumerate(bmap2.components):
            tet2, f2 = bmap2.faces[comp2.triangles[0]]
            if tet2 >= t.n_tets:
                target = ci2
                break
        if target is None:
            raise GridIncompatible("collar did not leave an outer boundary")
        sub, back = _subsurface(bmap2.surface, bmap2.components[target].triangles)
        faces = [bmap2.faces[tr] for tr in back]
        K, p, iso = detect_grid(sub, k * m)
        if K != k * m:
            raise GridIncompatible("collar outer boundary has the wrong resolution")

    glabels = {}
    tris = _grid_triangles(K, p)
    for gidx, corners in enumerate(tris):
        s_tri, s_map = iso[gidx]
        tet2, f2 = faces[s_tri]
        for c in range(3):
            glabels.setdefault(corners[c], base.label_of_slot(tet2, FACE_VERTS[f2][s_map[c]]))
    return _collapse_layer(base, K, p, m, faces, iso, glabels)


# --- example library --------------------------------------------------------


def s3_bd4simplex() -> Triangulation:
    return Triangulation.from_vertex_tuples(
        list(itertools.combinations(range(5), 4))
    )


def s3_two_tet() -> Triangulation:
    return Triangulation(2, [(0, f, 1, f, (0, 1, 2)) for f in range(4)])


EXAMPLES = (
    "s3-bd4simplex",
    "s3-two-tet",
    "torus7",
    "solid-torus",
    "sphere-bd-tet",
    "pinched-s3",
    "susp-torus",
)


def example(name: str):
    """Named seed complexes; torus7 and sphere-bd-tet are 2-complexes."""
    if name == "s3-bd4simplex":
        return s3_bd4simplex()
    if name == "s3-two-tet":
        return s3_two_tet()
    if name == "torus7":
        return torus7()
    if name == "sphere-bd-tet":
        return sphere_bd_tet()
    if name == "solid-torus":
        return solid_torus()
    if name == "pinched-s3":
        return identify_vertices(s3_bd4simplex(), [("0", "4")])
    if name == "susp-torus":
        return suspension(torus7())
    raise UnknownExample(f"unknown example {name!r} (choose from {', '.join(EXAMPLES)})")
