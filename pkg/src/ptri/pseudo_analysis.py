"""Pseudomanifold validation, link classification, and the natural skeletons.

X(1) consists of the points with no ball neighborhood: the edges with two or
more link circles together with every vertex whose link is not a sphere.
X(0) removes from X(1) the points that still have a D^1 x c(circles)
neighborhood: combinatorially, the vertices whose link is a suspension of
k >= 2 circles sit on X(1) but not in X(0); everything else singular is X(0).
The Gamma-signature is the weighted multigraph of X(0) points and singular
chains that indexes the invariant family.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import ComplexNotClosed, InconsistentSkeleton
from .tri_core import Triangulation


class PseudomanifoldStatus(Enum):
    CLOSED = "closedPseudomanifold"
    WITH_BOUNDARY = "pseudomanifoldWithBoundary"
    INVALID = "invalid"


@dataclass(frozen=True)
class ValidationResult:
    status: PseudomanifoldStatus
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.status is not PseudomanifoldStatus.INVALID


def validate(t: Triangulation) -> ValidationResult:
    """Closed iff every face class has two slots; with boundary otherwise.

    Gluings are involutive, so a face class can never have more than two
    slots; invalid is reserved for the empty complex (malformed gluing files
    are rejected at construction time).
    """
    if t.n_tets == 0:
        return ValidationResult(PseudomanifoldStatus.INVALID, "empty complex")
    if t.has_reversed_edges():
        return ValidationResult(
            PseudomanifoldStatus.INVALID,
            "an edge is identified with itself reversed",
        )
    if t.boundary_faces:
        return ValidationResult(PseudomanifoldStatus.WITH_BOUNDARY)
    return ValidationResult(PseudomanifoldStatus.CLOSED)


class VertexNature(Enum):
    MANIFOLD = "manifoldPoint"
    X1_NOT_X0 = "x1NotX0"
    X0 = "x0Point"


@dataclass(frozen=True)
class SurfaceComponent:
    orientable: bool
    euler_characteristic: int


@dataclass(frozen=True)
class SurfaceClassification:
    """Classification of a vertex link as a 2-pseudomanifold.

    `components` lists the closed surfaces of the normalization (the link with
    every pinch point pulled apart), one entry per triangle-adjacency
    component. `pinch_data` maps each singular link vertex to its circle
    count and the components its copies land in. `raw_euler` is the Euler
    characteristic of the unnormalized link.
    """

    components: tuple[SurfaceComponent, ...]
    pinch_data: tuple[tuple[int, int, tuple[int, ...]], ...]
    raw_euler: int

    @property
    def is_sphere(self) -> bool:
        return (
            len(self.components) == 1
            and not self.pinch_data
            and self.components[0].orientable
            and self.components[0].euler_characteristic == 2
        )


def classify_vertex_link(t: Triangulation, vi: int) -> SurfaceClassification:
    """Split the link at its pinch points and classify each closed surface.

    Normalization replaces each link vertex by one copy per link circle; the
    copies are attributed to triangle-adjacency components, which are exactly
    the components of the normalized surface.
    """
    link = t.vertex_link(vi)
    orientable = link.orientable_components()
    n_comp = link.n_components
    faces = [0] * n_comp
    for tri in range(link.n):
        faces[link.component_of_triangle(tri)] += 1
    edges = [0] * n_comp
    for slots in link.edge_classes:
        edges[link.component_of_triangle(slots[0][0])] += 1
    verts = [0] * n_comp
    pinch = []
    for ci in range(len(link.corner_classes)):
        arcs = link.corner_link(ci)
        comps = []
        for arc in arcs:
            if not arc.closed:
                raise ComplexNotClosed("open corner link in a closed complex")
            comps.append(link.component_of_triangle(arc.steps[0][0]))
        for c in comps:
            verts[c] += 1
        if len(arcs) > 1:
            pinch.append((ci, len(arcs), tuple(sorted(comps))))
    components = tuple(
        SurfaceComponent(orientable[c], verts[c] - edges[c] + faces[c])
        for c in range(n_comp)
    )
    raw = len(link.corner_classes) - len(link.edge_classes) + link.n
    return SurfaceClassification(components, tuple(pinch), raw)


def vertex_nature(t: Triangulation, vi: int) -> VertexNature:
    """Manifold point, suspension-of-circles point, or forced vertex.

    The suspension test is purely combinatorial: exactly two pinch vertices,
    every normalized component a sphere containing exactly one copy of each,
    and at least two components.
    """
    cls = classify_vertex_link(t, vi)
    if cls.is_sphere:
        return VertexNature.MANIFOLD
    if len(cls.pinch_data) == 2:
        (p, kp, comps_p), (q, kq, comps_q) = cls.pinch_data
        k = len(cls.components)
        all_spheres = all(
            c.orientable and c.euler_characteristic == 2 for c in cls.components
        )
        covers = (
            sorted(comps_p) == list(range(k)) and sorted(comps_q) == list(range(k))
        )
        if p != q and k >= 2 and kp == k and kq == k and all_spheres and covers:
            return VertexNature.X1_NOT_X0
    return VertexNature.X0


@dataclass(frozen=True)
class GammaArc:
    """A maximal chain of singular edges.

    For a path, `ends` holds the two X(0) node labels (sorted) and `interior`
    the interior vertex labels in the corresponding order; for a closed
    circle, `ends` is None and `interior` is the cyclic label sequence in
    canonical rotation. `k` is the common link-circle count of the chain's
    edges and `edge_count` its length.
    """

    ends: Optional[tuple[str, str]]
    interior: tuple[str, ...]
    k: int
    edge_count: int


@dataclass(frozen=True)
class GammaSignature:
    x0_labels: tuple[str, ...]
    arcs: tuple[GammaArc, ...]

    def unlabeled_canonical(self) -> str:
        """Canonical form of the weighted multigraph, labels forgotten.

        Nodes are the X(0) points plus one node per closed circle; arcs carry
        (edge count, interior count, k). Minimized over kind-preserving node
        permutations; the graphs are tiny.
        """
        x0 = list(self.x0_labels)
        paths = [a for a in self.arcs if a.ends is not None]
        circles = [a for a in self.arcs if a.ends is None]
        circ_part = sorted((a.edge_count, len(a.interior), a.k) for a in circles)
        n = len(x0)
        if n == 0:
            return repr((circ_part, []))
        best = None
        for perm in itertools.permutations(range(n)):
            relab = {lbl: perm[i] for i, lbl in enumerate(x0)}
            arcs = sorted(
                (
                    tuple(sorted((relab[a.ends[0]], relab[a.ends[1]]))),
                    a.edge_count,
                    len(a.interior),
                    a.k,
                )
                for a in paths
            )
            if best is None or arcs < best:
                best = arcs
        return repr((circ_part, best))


@dataclass(frozen=True)
class SkeletonReport:
    x0_vertices: tuple[int, ...]
    x1_vertices: tuple[int, ...]
    x1_edges: tuple[int, ...]
    natures: tuple[VertexNature, ...]
    edge_circles: tuple[int, ...]
    gamma: GammaSignature

    def x0_labels(self, t: Triangulation) -> tuple[str, ...]:
        return tuple(sorted(t.vertex_labels[v] for v in self.x0_vertices))


def _canonical_cycle(labels: list[str]) -> tuple[str, ...]:
    """Lexicographically minimal rotation/reflection of a cyclic sequence."""
    best = None
    seqs = [labels, labels[::-1]]
    for seq in seqs:
        for i in range(len(seq)):
            rot = tuple(seq[i:] + seq[:i])
            if best is None or rot < best:
                best = rot
    return best if best is not None else ()


def skeletons(t: Triangulation) -> SkeletonReport:
    """Compute X(0), X(1), and the Gamma-signature of a closed complex."""
    if not t.is_closed:
        raise ComplexNotClosed("skeleton analysis requires a closed pseudomanifold")
    natures = tuple(vertex_nature(t, vi) for vi in range(len(t.vertex_classes)))
    edge_circles = tuple(
        t.edge_circle_count(ei) for ei in range(len(t.edge_classes))
    )
    x1_edges = tuple(ei for ei, c in enumerate(edge_circles) if c >= 2)
    x1_vertices = tuple(
        vi for vi, nat in enumerate(natures) if nat is not VertexNature.MANIFOLD
    )
    x0_vertices = tuple(
        vi for vi, nat in enumerate(natures) if nat is VertexNature.X0
    )

    # Edge-end incidence of the singular graph. A loop contributes both ends.
    ends_at: dict[int, list[tuple[int, int]]] = {}
    edge_ends: dict[int, tuple[int, int]] = {}
    for ei in x1_edges:
        slot = t.edge_classes[ei][0]
        tt, e = divmod(slot, 6)
        from .tri_core import EDGE_PAIRS

        a, b = EDGE_PAIRS[e]
        va, vb = t.vertex_class_of(tt, a), t.vertex_class_of(tt, b)
        edge_ends[ei] = (va, vb)
        ends_at.setdefault(va, []).append((ei, 0))
        ends_at.setdefault(vb, []).append((ei, 1))

    for v in ends_at:
        if natures[v] is VertexNature.MANIFOLD:
            raise InconsistentSkeleton(
                f"singular edge ends at manifold vertex {t.vertex_labels[v]}"
            )
    for vi in x1_vertices:
        if natures[vi] is VertexNature.X1_NOT_X0:
            if len(ends_at.get(vi, ())) != 2:
                raise InconsistentSkeleton(
                    f"vertex {t.vertex_labels[vi]} should have exactly 2 singular ends"
                )

    # Chain the singular edges through the degree-2 interior vertices. A
    # walk tracks the incoming (edge, side) end so loop edges work.
    used: set[int] = set()
    arcs: list[GammaArc] = []

    def chain_k(chain):
        ks = {edge_circles[e] for e in chain}
        if len(ks) != 1:
            raise InconsistentSkeleton("link-circle count changes along a chain")
        return ks.pop()

    # paths first: start at x0 endpoints
    for vi in sorted(v for v in ends_at if natures[v] is VertexNature.X0):
        for start in sorted(ends_at[vi]):
            if start[0] in used:
                continue
            chain = [start[0]]
            verts: list[int] = []
            cur_end = (start[0], 1 - start[1])
            while True:
                v = edge_ends[cur_end[0]][cur_end[1]]
                if natures[v] is not VertexNature.X1_NOT_X0:
                    break
                verts.append(v)
                a, b = sorted(ends_at[v])
                out = b if a == cur_end else a
                chain.append(out[0])
                cur_end = (out[0], 1 - out[1])
            used.update(chain)
            la = t.vertex_labels[vi]
            lb = t.vertex_labels[v]
            interior = [t.vertex_labels[w] for w in verts]
            if (lb, tuple(reversed(interior))) < (la, tuple(interior)):
                la, lb = lb, la
                interior = list(reversed(interior))
            arcs.append(GammaArc((la, lb), tuple(interior), chain_k(chain), len(chain)))

    # remaining singular edges form closed circles through interior vertices
    for ei in x1_edges:
        if ei in used:
            continue
        start = (ei, 0)
        chain = [ei]
        verts = []
        cur_end = (ei, 1)
        while True:
            v = edge_ends[cur_end[0]][cur_end[1]]
            if natures[v] is not VertexNature.X1_NOT_X0:
                raise InconsistentSkeleton("unclosed singular circle")
            verts.append(v)
            a, b = sorted(ends_at[v])
            out = b if a == cur_end else a
            if out == start:
                break
            chain.append(out[0])
            cur_end = (out[0], 1 - out[1])
        used.update(chain)
        labels = _canonical_cycle([t.vertex_labels[w] for w in verts])
        arcs.append(GammaArc(None, labels, chain_k(chain), len(chain)))

    gamma = GammaSignature(
        tuple(sorted(t.vertex_labels[v] for v in x0_vertices)),
        tuple(sorted(arcs, key=lambda a: (a.ends is None, a.ends or (), a.interior, a.k, a.edge_count))),
    )
    return SkeletonReport(
        x0_vertices, x1_vertices, x1_edges, natures, edge_circles, gamma
    )


def same_gamma_class(r1: SkeletonReport, r2: SkeletonReport) -> bool:
    """Weighted-multigraph isomorphism of the two Gamma-signatures."""
    return r1.gamma.unlabeled_canonical() == r2.gamma.unlabeled_canonical()
