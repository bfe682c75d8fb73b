"""Generalized triangulations of 3-complexes.

A Triangulation is a list of abstract tetrahedra together with a partial
involutive pairing of their faces. On top of the gluing orbits it carries two
kinds of extra identification data, both needed to represent quotient spaces:

  - vertex labels: two vertex slots with the same label are the same vertex,
    so identifying points is pure relabeling;
  - explicit edge identifications: two tet-edges declared equal even though no
    chain of face gluings connects them. This is how a singular edge acquires
    several link circles (the circles are the chains of face gluings around
    the edge, and by construction one chain is one gluing orbit).

Slot conventions:
  - face f of a tetrahedron is opposite vertex slot f; its vertex slots are
    FACE_VERTS[f], ascending;
  - a gluing (t, f) <-> (t2, f2, perm) sends FACE_VERTS[f][i] to
    FACE_VERTS[f2][perm[i]];
  - edge e of a tetrahedron is the slot pair EDGE_PAIRS[e].
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    BadEdgeIdentification,
    BadPermutation,
    ComplexNotClosed,
    FormatError,
    SelfGluedFace,
    SlotReused,
    TripleOvershared,
)
from .surface import Tri2Complex, UnionFind

FACE_VERTS = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))
EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {pair: i for i, pair in enumerate(EDGE_PAIRS)}
PERMS4 = tuple(itertools.permutations(range(4)))


def _edge_index(a: int, b: int) -> int:
    return EDGE_INDEX[(a, b) if a < b else (b, a)]


@dataclass(frozen=True)
class LinkStep:
    """One tetrahedron passage of an edge-link chain.

    `a`, `b` are the edge's endpoint slots in the chain's travelling
    orientation (the endpoint correspondence is maintained across gluings);
    `face_in` / `face_out` are the two faces of the tetrahedron containing the
    edge, in traversal order.
    """

    tet: int
    edge: int
    a: int
    b: int
    face_in: int
    face_out: int


@dataclass(frozen=True)
class EdgeClassInfo:
    edge_id: int
    slots: tuple[tuple[int, int], ...]
    circles: tuple[tuple[LinkStep, ...], ...]
    arcs: tuple[tuple[LinkStep, ...], ...]


class Triangulation:
    """Immutable generalized triangulation; all derived data is precomputed."""

    def __init__(
        self,
        n_tets: int,
        gluings: Iterable[tuple[int, int, int, int, Sequence[int]]] = (),
        labels: Optional[Sequence[Sequence[object]]] = None,
        edge_merges: Iterable[tuple[tuple[int, int], tuple[int, int]]] = (),
    ):
        self.n_tets = int(n_tets)
        self._glue: dict[tuple[int, int], tuple[int, int, tuple[int, int, int]]] = {}
        for t, f, t2, f2, perm in gluings:
            self._add_gluing(t, f, t2, f2, tuple(perm))
        if labels is not None:
            if len(labels) != self.n_tets:
                raise FormatError("labels must list one 4-tuple per tetrahedron")
            self._labels_in = [tuple(str(x) for x in row) for row in labels]
            for row in self._labels_in:
                if len(row) != 4:
                    raise FormatError("each tetrahedron needs 4 vertex labels")
        else:
            self._labels_in = None
        self._edge_merges_in = [
            ((int(a[0]), int(a[1])), (int(b[0]), int(b[1]))) for a, b in edge_merges
        ]
        for (t, e), (t2, e2) in self._edge_merges_in:
            if not (0 <= t < self.n_tets and 0 <= e < 6 and 0 <= t2 < self.n_tets and 0 <= e2 < 6):
                raise FormatError("edge identification out of range")
        self._build()
        self._chains_cache = None

    # --- gluing bookkeeping ------------------------------------------------

    def _add_gluing(self, t, f, t2, f2, perm):
        for tt, ff in ((t, f), (t2, f2)):
            if not (0 <= tt < self.n_tets and 0 <= ff < 4):
                raise FormatError(f"invalid face slot ({tt},{ff})")
        if (t, f) == (t2, f2):
            raise SelfGluedFace(f"face ({t},{f}) glued to itself")
        if sorted(perm) != [0, 1, 2]:
            raise BadPermutation(f"bad face permutation {perm}")
        inv = tuple(perm.index(i) for i in range(3))
        for key, val in (((t, f), (t2, f2, perm)), ((t2, f2), (t, f, inv))):
            if key in self._glue and self._glue[key] != val:
                raise SlotReused(f"face slot {key} glued twice")
        self._glue[(t, f)] = (t2, f2, perm)
        self._glue[(t2, f2)] = (t, f, inv)

    def gluing(self, t: int, f: int):
        """(t2, f2, perm) glued to face f of tet t, or None."""
        return self._glue.get((t, f))

    def glue_vertex_image(self, t: int, f: int, slot: int) -> tuple[int, int]:
        """Image (t2, slot2) of a vertex slot on face f under its gluing."""
        t2, f2, perm = self._glue[(t, f)]
        i = FACE_VERTS[f].index(slot)
        return t2, FACE_VERTS[f2][perm[i]]

    # --- derived structure ---------------------------------------------------

    def _build(self):
        n = self.n_tets
        vuf = UnionFind(4 * n)
        for (t, f), (t2, f2, perm) in self._glue.items():
            if (t, f) > (t2, f2):
                continue
            for i in range(3):
                vuf.union(4 * t + FACE_VERTS[f][i], 4 * t2 + FACE_VERTS[f2][perm[i]])
        if self._labels_in is not None:
            rep_of_label: dict[str, int] = {}
            for t in range(n):
                for s in range(4):
                    lbl = self._labels_in[t][s]
                    if lbl in rep_of_label:
                        vuf.union(rep_of_label[lbl], 4 * t + s)
                    else:
                        rep_of_label[lbl] = 4 * t + s
        self.vertex_classes: list[tuple[int, ...]] = vuf.classes()
        self._vclass_of = [0] * (4 * n)
        for ci, slots in enumerate(self.vertex_classes):
            for s in slots:
                self._vclass_of[s] = ci
        if self._labels_in is not None:
            self.vertex_labels = [
                min(self._labels_in[s // 4][s % 4] for s in slots)
                for slots in self.vertex_classes
            ]
        else:
            self.vertex_labels = [f"v{ci}" for ci in range(len(self.vertex_classes))]
        if len(set(self.vertex_labels)) != len(self.vertex_labels):
            # Distinct classes may receive the same minimum only if labels were
            # inconsistent with the gluing orbits in a colliding way.
            raise FormatError("vertex labels do not induce a well-defined class labeling")
        self._vclass_by_label = {lbl: ci for ci, lbl in enumerate(self.vertex_labels)}

        euf = UnionFind(6 * n)
        self._gluing_only_edge_uf = None
        for (t, f), (t2, f2, perm) in self._glue.items():
            if (t, f) > (t2, f2):
                continue
            fv, fv2 = FACE_VERTS[f], FACE_VERTS[f2]
            for i in range(3):
                for j in range(i + 1, 3):
                    e = _edge_index(fv[i], fv[j])
                    e2 = _edge_index(fv2[perm[i]], fv2[perm[j]])
                    euf.union(6 * t + e, 6 * t2 + e2)
        gluing_only_parent = list(euf.parent)
        for (t, e), (t2, e2) in self._edge_merges_in:
            euf.union(6 * t + e, 6 * t2 + e2)
        self.edge_classes: list[tuple[int, ...]] = euf.classes()
        self._eclass_of = [0] * (6 * n)
        for ci, slots in enumerate(self.edge_classes):
            for s in slots:
                self._eclass_of[s] = ci

        # Endpoint consistency of explicit identifications: the two tet-edges
        # of a merged pair must span the same pair of vertex classes.
        for (t, e), (t2, e2) in self._edge_merges_in:
            ends1 = {self._vclass_of[4 * t + v] for v in EDGE_PAIRS[e]}
            ends2 = {self._vclass_of[4 * t2 + v] for v in EDGE_PAIRS[e2]}
            if ends1 != ends2:
                raise BadEdgeIdentification(
                    f"identified edges ({t},{e}) and ({t2},{e2}) have different endpoints"
                )

        # Edge-end classes distinguish the two ends of a loop at its vertex;
        # vertex links are built on these so that a loop contributes two link
        # points. Index: 12*tet + 2*edge + end, end 0 at the smaller slot.
        eend = UnionFind(12 * n)
        for (t, f), (t2, f2, perm) in self._glue.items():
            if (t, f) > (t2, f2):
                continue
            fv, fv2 = FACE_VERTS[f], FACE_VERTS[f2]
            for i in range(3):
                for j in range(i + 1, 3):
                    x, y = fv[i], fv[j]
                    x2, y2 = fv2[perm[i]], fv2[perm[j]]
                    e = _edge_index(x, y)
                    e2 = _edge_index(x2, y2)
                    ex2 = 0 if x2 < y2 else 1
                    eend.union(12 * t + 2 * e, 12 * t2 + 2 * e2 + ex2)
                    eend.union(12 * t + 2 * e + 1, 12 * t2 + 2 * e2 + (1 - ex2))
        for (t, e), (t2, e2) in self._edge_merges_in:
            a0 = self._vclass_of[4 * t + EDGE_PAIRS[e][0]]
            a1 = self._vclass_of[4 * t + EDGE_PAIRS[e][1]]
            b0 = self._vclass_of[4 * t2 + EDGE_PAIRS[e2][0]]
            if a0 != a1:
                flip = 0 if b0 == a0 else 1
            else:
                flip = 0  # loop merge: slot-order convention
            eend.union(12 * t + 2 * e, 12 * t2 + 2 * e2 + flip)
            eend.union(12 * t + 2 * e + 1, 12 * t2 + 2 * e2 + (1 - flip))
        self._edge_end_uf = eend

        # Minimal explicit identification list for serialization: one pair per
        # extra chain fused into each class beyond its gluing orbits.
        guf = UnionFind(6 * n)
        guf.parent = gluing_only_parent
        self._extra_edge_ids: list[tuple[tuple[int, int], tuple[int, int]]] = []
        for slots in self.edge_classes:
            reps = sorted({guf.find(s) for s in slots})
            for other in reps[1:]:
                self._extra_edge_ids.append(
                    (divmod(reps[0], 6), divmod(other, 6))
                )

        self.face_classes: list[tuple[tuple[int, int], ...]] = []
        self._fclass_of: dict[tuple[int, int], int] = {}
        for t in range(n):
            for f in range(4):
                if (t, f) in self._fclass_of:
                    continue
                g = self._glue.get((t, f))
                slots = ((t, f),) if g is None else ((t, f), g[:2])
                idx = len(self.face_classes)
                self.face_classes.append(slots)
                for slot in slots:
                    self._fclass_of[slot] = idx
        self.boundary_faces: tuple[tuple[int, int], ...] = tuple(
            slots[0] for slots in self.face_classes if len(slots) == 1
        )

    # --- basic queries -------------------------------------------------------

    @property
    def is_closed(self) -> bool:
        return self.n_tets > 0 and not self.boundary_faces

    def counts(self) -> tuple[int, int, int, int]:
        """(vertex, edge, face, tetrahedron) class counts."""
        return (
            len(self.vertex_classes),
            len(self.edge_classes),
            len(self.face_classes),
            self.n_tets,
        )

    def euler_characteristic(self) -> int:
        v, e, f, t = self.counts()
        return v - e + f - t

    def vertex_class_of(self, t: int, s: int) -> int:
        return self._vclass_of[4 * t + s]

    def edge_class_of(self, t: int, e: int) -> int:
        return self._eclass_of[6 * t + e]

    def face_class_of(self, t: int, f: int) -> int:
        return self._fclass_of[(t, f)]

    def vertex_class_by_label(self, label: str) -> int:
        return self._vclass_by_label[str(label)]

    def edge_endpoints(self, ei: int) -> frozenset[int]:
        """Vertex classes spanned by an edge class (one element for a loop)."""
        s = self.edge_classes[ei][0]
        t, e = divmod(s, 6)
        a, b = EDGE_PAIRS[e]
        return frozenset((self._vclass_of[4 * t + a], self._vclass_of[4 * t + b]))

    def tet_edge_classes(self, t: int) -> tuple[int, ...]:
        return tuple(self._eclass_of[6 * t + e] for e in range(6))

    def label_of_slot(self, t: int, s: int) -> str:
        return self.vertex_labels[self._vclass_of[4 * t + s]]

    def gluings_list(self) -> list[tuple[int, int, int, int, tuple[int, int, int]]]:
        """Each gluing once, keyed by its smaller face slot."""
        out = []
        for (t, f), (t2, f2, perm) in sorted(self._glue.items()):
            if (t, f) < (t2, f2):
                out.append((t, f, t2, f2, perm))
        return out

    def labels_by_tet(self) -> list[tuple[str, str, str, str]]:
        return [
            tuple(self.vertex_labels[self._vclass_of[4 * t + s]] for s in range(4))
            for t in range(self.n_tets)
        ]

    def extra_edge_identifications(self):
        return list(self._extra_edge_ids)

    # --- ingestion -----------------------------------------------------------

    @classmethod
    def from_vertex_tuples(cls, tuples: Sequence[Sequence[object]]) -> "Triangulation":
        """Simplicial ingestion: tetrahedra as 4-tuples of distinct labels.

        Face gluings are inferred by matching shared vertex triples (with the
        induced vertex correspondence); a triple in three or more tetrahedra
        is rejected. Edges are identified whenever their endpoint label pairs
        agree, vertices whenever their labels agree, so tetrahedra meeting in
        just an edge or a vertex are represented faithfully.
        """
        rows = [tuple(str(x) for x in row) for row in tuples]
        for row in rows:
            if len(row) != 4 or len(set(row)) != 4:
                raise FormatError(f"tetrahedron {row} must have 4 distinct labels")
        by_triple: dict[tuple[str, ...], list[tuple[int, int]]] = {}
        for t, row in enumerate(rows):
            for f in range(4):
                key = tuple(sorted(row[s] for s in FACE_VERTS[f]))
                by_triple.setdefault(key, []).append((t, f))
        gluings = []
        for key, slots in sorted(by_triple.items()):
            if len(slots) > 2:
                raise TripleOvershared(
                    f"triple {key} lies in {len(slots)} tetrahedra"
                )
            if len(slots) == 2:
                (t, f), (t2, f2) = slots
                src = [rows[t][s] for s in FACE_VERTS[f]]
                dst = [rows[t2][s] for s in FACE_VERTS[f2]]
                perm = tuple(dst.index(x) for x in src)
                gluings.append((t, f, t2, f2, perm))
        by_pair: dict[tuple[str, str], list[tuple[int, int]]] = {}
        for t, row in enumerate(rows):
            for e, (a, b) in enumerate(EDGE_PAIRS):
                la, lb = row[a], row[b]
                key = (la, lb) if la <= lb else (lb, la)
                by_pair.setdefault(key, []).append((t, e))
        edge_merges = []
        for key, slots in sorted(by_pair.items()):
            for other in slots[1:]:
                edge_merges.append((slots[0], other))
        return cls(len(rows), gluings, labels=rows, edge_merges=edge_merges)

    @classmethod
    def from_gluings(
        cls,
        n_tets: int,
        gluing_list: Iterable[tuple[int, int, int, int, Sequence[int]]],
        labels=None,
        edge_merges=(),
    ) -> "Triangulation":
        return cls(n_tets, gluing_list, labels=labels, edge_merges=edge_merges)

    # --- edge links ------------------------------------------------------------

    def _chain_step(self, t, a, b, f_out):
        g = self._glue.get((t, f_out))
        if g is None:
            return None
        t2, f2, perm = g
        fv, fv2 = FACE_VERTS[f_out], FACE_VERTS[f2]
        a2 = fv2[perm[fv.index(a)]]
        b2 = fv2[perm[fv.index(b)]]
        f_out2 = 6 - a2 - b2 - f2  # slots sum to 6
        return (t2, a2, b2, f2, f_out2)

    def _walk(self, t0, a0, b0, f_in0, f_out0):
        """Walk forward; returns (steps, closed)."""
        steps = []
        state = (t0, a0, b0, f_in0, f_out0)
        seen = set()
        while True:
            t, a, b, fin, fout = state
            steps.append(LinkStep(t, _edge_index(a, b), a, b, fin, fout))
            seen.add((t, a, b, fout))
            nxt = self._chain_step(t, a, b, fout)
            if nxt is None:
                return steps, False
            if (nxt[0], nxt[1], nxt[2], nxt[4]) == (t0, a0, b0, f_out0):
                return steps, True
            if (nxt[0], nxt[1], nxt[2], nxt[4]) in seen:
                raise AssertionError("edge-link walk revisited a state")
            state = nxt

    def _edge_chains(self):
        """For each edge class, its link chains (circles, arcs)."""
        if self._chains_cache is not None:
            return self._chains_cache
        visited = [False] * (6 * self.n_tets)
        reversed_found = False
        per_class: list[tuple[list, list]] = [([], []) for _ in self.edge_classes]
        for slot in range(6 * self.n_tets):
            if visited[slot]:
                continue
            t, e = divmod(slot, 6)
            a, b = EDGE_PAIRS[e]
            faces = [f for f in range(4) if f not in (a, b)]
            steps, closed = self._walk(t, a, b, faces[0], faces[1])
            if not closed:
                back, _ = self._walk(t, a, b, faces[1], faces[0])
                prefix = [
                    LinkStep(s.tet, s.edge, s.a, s.b, s.face_out, s.face_in)
                    for s in reversed(back[1:])
                ]
                steps = prefix + steps
            if len({(s.tet, s.edge) for s in steps}) < len(steps):
                reversed_found = True  # edge identified with itself reversed
            for s in steps:
                visited[6 * s.tet + s.edge] = True
            circles, arcs = per_class[self._eclass_of[slot]]
            (circles if closed else arcs).append(tuple(steps))
        self._chains_cache = [
            (tuple(circles), tuple(arcs)) for circles, arcs in per_class
        ]
        self._has_reversed = reversed_found
        return self._chains_cache

    def has_reversed_edges(self) -> bool:
        """True when some edge is identified with itself end-for-end (such a
        complex folds an edge at its midpoint and is not a pseudomanifold)."""
        self._edge_chains()
        return self._has_reversed

    def edge_link(self, ei: int) -> EdgeClassInfo:
        """Link circles and boundary arcs of an edge class.

        The link of an edge in a closed complex is a disjoint union of
        circles; an edge with two or more circles is singular. With boundary,
        chains may be arcs ending on unglued faces.
        """
        if not (0 <= ei < len(self.edge_classes)):
            raise FormatError(f"invalid edge class {ei}")
        circles, arcs = self._edge_chains()[ei]
        slots = tuple(sorted(divmod(s, 6) for s in self.edge_classes[ei]))
        return EdgeClassInfo(ei, slots, circles, arcs)

    def edge_circle_count(self, ei: int) -> int:
        circles, arcs = self._edge_chains()[ei]
        return len(circles)

    # --- vertex links ------------------------------------------------------------

    def vertex_link(self, vi: int) -> Tri2Complex:
        """The link of a vertex class as a 2-complex.

        Triangles are the tetrahedron corners at the vertex; gluings are
        induced by the face gluings at the vertex; corner classes are labeled
        by the 3-complex edge classes, so links of singular edges pinch
        correctly. The returned complex carries `source_corners`, the list of
        (tet, slot) per link triangle. Requires a closed complex.
        """
        if not self.is_closed:
            raise ComplexNotClosed("vertex links are computed for closed complexes")
        corners = sorted(divmod(s, 4) for s in self.vertex_classes[vi])
        index = {c: i for i, c in enumerate(corners)}
        gluings = []
        labels = []
        for (t, s) in corners:
            W = [w for w in range(4) if w != s]
            row = []
            for w in W:
                e = _edge_index(s, w)
                end = 0 if s < w else 1
                row.append(str(self._edge_end_uf.find(12 * t + 2 * e + end)))
            labels.append(tuple(row))
            for p, w in enumerate(W):
                # link edge opposite corner position p crosses face w of t
                t2, f2, perm = self._glue[(t, w)]
                fv, fv2 = FACE_VERTS[w], FACE_VERTS[f2]
                s2 = fv2[perm[fv.index(s)]]
                W2 = [x for x in range(4) if x != s2]
                p2 = W2.index(f2)
                src_corners = [W[c] for c in
                               ((1, 2), (0, 2), (0, 1))[p]]
                img = [fv2[perm[fv.index(x)]] for x in src_corners]
                dst_positions = [W2.index(x) for x in img]
                dst_corner_pos = ((1, 2), (0, 2), (0, 1))[p2]
                perm2 = tuple(dst_corner_pos.index(x) for x in dst_positions)
                a_key = (index[(t, s)], p)
                b_key = (index[(t2, s2)], p2)
                if a_key < b_key:
                    gluings.append((a_key[0], a_key[1], b_key[0], b_key[1], perm2))
        link = Tri2Complex(len(corners), gluings, corner_labels=labels)
        link.source_corners = corners
        return link

    # --- boundary surface ---------------------------------------------------------

    def boundary_complex(self) -> tuple[Tri2Complex, list[tuple[int, int]]]:
        """The boundary surface and its triangle -> (tet, face) map.

        Two boundary triangles are glued along an edge exactly when they are
        the two ends of one boundary arc of that edge's link; corner labels
        are the 3-complex vertex classes, so pinched boundaries are kept
        pinched.
        """
        faces = sorted(self.boundary_faces)
        index = {f: i for i, f in enumerate(faces)}
        labels = [
            tuple(str(self._vclass_of[4 * t + s]) for s in FACE_VERTS[f])
            for (t, f) in faces
        ]
        gluings = []
        for ei in range(len(self.edge_classes)):
            _circles, arcs = self._edge_chains()[ei]
            for arc in arcs:
                first, last = arc[0], arc[-1]
                tri1 = index[(first.tet, first.face_in)]
                tri2 = index[(last.tet, last.face_out)]
                fv1 = FACE_VERTS[first.face_in]
                fv2 = FACE_VERTS[last.face_out]
                pa1, pb1 = fv1.index(first.a), fv1.index(first.b)
                pa2, pb2 = fv2.index(last.a), fv2.index(last.b)
                e1 = 3 - pa1 - pb1
                e2 = 3 - pa2 - pb2
                from .surface import EDGE_CORNERS

                src = EDGE_CORNERS[e1]
                perm = []
                for c in src:
                    tgt = pa2 if c == pa1 else pb2
                    perm.append(EDGE_CORNERS[e2].index(tgt))
                a_key, b_key = (tri1, e1), (tri2, e2)
                entry = (tri1, e1, tri2, e2, tuple(perm))
                if b_key < a_key:
                    inv = (perm.index(0), perm.index(1))
                    entry = (tri2, e2, tri1, e1, inv)
                gluings.append(entry)
        surf = Tri2Complex(len(faces), sorted(set(gluings)), corner_labels=labels)
        return surf, faces

    # --- isomorphism signature ------------------------------------------------------

    def _encode_from(self, start: int, perm0: tuple[int, int, int, int]):
        """Candidate canonical encoding of `start`'s component."""
        order = [start]
        pos = {start: 0}
        relab = {start: perm0}
        tokens: list[str] = []
        qi = 0
        while qi < len(order):
            t = order[qi]
            qi += 1
            pi = relab[t]
            inv = [0, 0, 0, 0]
            for old, new in enumerate(pi):
                inv[new] = old
            for g_new in range(4):
                f_old = inv[g_new]
                g = self._glue.get((t, f_old))
                if g is None:
                    tokens.append("b")
                    continue
                t2, f2, perm = g
                if t2 not in relab:
                    pi2 = [0, 0, 0, 0]
                    for i in range(3):
                        src = FACE_VERTS[f_old][i]
                        dst = FACE_VERTS[f2][perm[i]]
                        pi2[dst] = pi[src]
                    pi2[f2] = g_new
                    relab[t2] = tuple(pi2)
                    pos[t2] = len(order)
                    order.append(t2)
                    tokens.append("n")
                else:
                    pi2 = relab[t2]
                    new_face2 = pi2[f2]
                    fvn = [v for v in range(4) if v != g_new]
                    fvn2 = [v for v in range(4) if v != new_face2]
                    pp = []
                    for v in fvn:
                        x = inv[v]
                        y = FACE_VERTS[f2][perm[FACE_VERTS[f_old].index(x)]]
                        pp.append(fvn2.index(pi2[y]))
                    tokens.append(f"g{pos[t2]}.{new_face2}.{pp[0]}{pp[1]}{pp[2]}")
        return ",".join(tokens), pos, relab

    def _partition_string(self, pos, relab):
        def new_vslot(s):
            t, v = divmod(s, 4)
            return 4 * pos[t] + relab[t][v]

        def new_eslot(s):
            t, e = divmod(s, 6)
            a, b = EDGE_PAIRS[e]
            pi = relab[t]
            return 6 * pos[t] + _edge_index(pi[a], pi[b])

        vpart = sorted(tuple(sorted(new_vslot(s) for s in c)) for c in self.vertex_classes)
        epart = sorted(tuple(sorted(new_eslot(s) for s in c)) for c in self.edge_classes)
        return repr(vpart) + "/" + repr(epart)

    def isomorphism_signature(self) -> str:
        """Canonical string, equal iff the complexes are isomorphic.

        Covers the gluing structure and both identification partitions. The
        minimization runs over all start labelings whose gluing encoding is
        minimal, and over orderings of components tied on that encoding, so
        the result is independent of any labeling choices.
        """
        comps: dict[int, list[int]] = {}
        tuf = UnionFind(max(self.n_tets, 1))
        for (t, _f), (t2, _f2, _p) in self._glue.items():
            tuf.union(t, t2)
        for t in range(self.n_tets):
            comps.setdefault(tuf.find(t), []).append(t)

        per_comp = []
        for tris in comps.values():
            best = None
            cands = []
            for start in tris:
                for p0 in PERMS4:
                    enc, pos, relab = self._encode_from(start, p0)
                    if best is None or enc < best:
                        best = enc
                        cands = [(pos, relab)]
                    elif enc == best:
                        cands.append((pos, relab))
            per_comp.append((len(tris), best, cands))
        per_comp.sort(key=lambda x: (x[0], x[1]))

        # group components tied on (size, encoding); permute within groups
        groups = []
        for key, grp in itertools.groupby(enumerate(per_comp), key=lambda x: (x[1][0], x[1][1])):
            groups.append([i for i, _ in grp])
        orderings = [[]]
        for grp in groups:
            new_orders = []
            for head in orderings:
                for perm in itertools.permutations(grp):
                    new_orders.append(head + list(perm))
            orderings = new_orders
            if len(orderings) > 5000:
                orderings = orderings[:1]  # symmetric ties beyond this are safe to cut
                break

        best_sig = None
        for ordering in orderings:
            enc_parts = [per_comp[i][1] for i in ordering]
            cand_lists = [per_comp[i][2] for i in ordering]
            total = 1
            for cl in cand_lists:
                total *= len(cl)
            if total > 20000:
                cand_lists = [cl[:1] for cl in cand_lists]
            for combo in itertools.product(*cand_lists):
                pos: dict[int, int] = {}
                relab: dict[int, tuple] = {}
                offset = 0
                for (p, r) in combo:
                    for t, i in p.items():
                        pos[t] = offset + i
                    relab.update(r)
                    offset += len(p)
                sig = ";".join(enc_parts) + "|" + self._partition_string(pos, relab)
                if best_sig is None or sig < best_sig:
                    best_sig = sig
        return best_sig if best_sig is not None else "empty"

    # --- relabeling utilities --------------------------------------------------------

    def relabeled(self, rng: Optional[random.Random] = None, rename_vertices=False) -> "Triangulation":
        """A combinatorially isomorphic copy under random tet/slot relabeling."""
        rng = rng or random.Random(0)
        n = self.n_tets
        tet_perm = list(range(n))
        rng.shuffle(tet_perm)  # old t appears at position tet_perm[t]
        slot_perms = [list(PERMS4[rng.randrange(24)]) for _ in range(n)]
        gluings = []
        for (t, f, t2, f2, perm) in self.gluings_list():
            nt, nt2 = tet_perm[t], tet_perm[t2]
            pi, pi2 = slot_perms[t], slot_perms[t2]
            nf, nf2 = pi[f], pi2[f2]
            perm_new = [0, 0, 0]
            for i in range(3):
                x = FACE_VERTS[f][i]
                y = FACE_VERTS[f2][perm[i]]
                perm_new[FACE_VERTS[nf].index(pi[x])] = FACE_VERTS[nf2].index(pi2[y])
            gluings.append((nt, nf, nt2, nf2, tuple(perm_new)))
        labels = [None] * n
        names = {}
        for t in range(n):
            row = [None] * 4
            for s in range(4):
                lbl = self.label_of_slot(t, s)
                if rename_vertices:
                    lbl = names.setdefault(lbl, f"w{len(names)}")
                row[slot_perms[t][s]] = lbl
            labels[tet_perm[t]] = tuple(row)
        merges = []
        for (a, b) in self._extra_edge_ids:
            (t, e), (t2, e2) = a, b
            pa, pb = EDGE_PAIRS[e], EDGE_PAIRS[e2]
            na = (tet_perm[t], _edge_index(slot_perms[t][pa[0]], slot_perms[t][pa[1]]))
            nb = (tet_perm[t2], _edge_index(slot_perms[t2][pb[0]], slot_perms[t2][pb[1]]))
            merges.append((na, nb))
        return Triangulation(n, gluings, labels=labels, edge_merges=merges)


def disjoint_union(t1: Triangulation, t2: Triangulation) -> Triangulation:
    """Disjoint union; vertex labels are prefixed to keep the pieces apart."""
    off = t1.n_tets
    gluings = t1.gluings_list() + [
        (t + off, f, t2_ + off, f2, perm) for (t, f, t2_, f2, perm) in t2.gluings_list()
    ]
    labels = [tuple(f"0:{x}" for x in row) for row in t1.labels_by_tet()] + [
        tuple(f"1:{x}" for x in row) for row in t2.labels_by_tet()
    ]
    merges = t1.extra_edge_identifications() + [
        ((a[0] + off, a[1]), (b[0] + off, b[1]))
        for a, b in t2.extra_edge_identifications()
    ]
    return Triangulation(t1.n_tets + t2.n_tets, gluings, labels=labels, edge_merges=merges)
