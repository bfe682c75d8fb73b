"""Triangulated 2-complexes (surfaces with identifications).

These arise in three roles: vertex links of 3-complexes, boundary surfaces of
3-complexes with boundary, and seed surfaces for cone/suspension/product
constructions. A Tri2Complex is a list of triangles glued along edges, with an
optional coarsening of the corner classes (needed so that a vertex link can
identify the two ends of a singular edge even when no chain of edge gluings
does so).

Conventions:
  - corners of a triangle are 0, 1, 2;
  - edge e of a triangle is the edge opposite corner e, with corner positions
    EDGE_CORNERS[e] listed ascending;
  - a gluing (t, e) <-> (t2, e2, perm) sends corner EDGE_CORNERS[e][i] to
    corner EDGE_CORNERS[e2][perm[i]].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    BadPermutation,
    FormatError,
    SelfGluedFace,
    SlotReused,
    TripleOvershared,
)

EDGE_CORNERS = ((1, 2), (0, 2), (0, 1))


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self) -> list[tuple[int, ...]]:
        groups: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return [tuple(groups[r]) for r in sorted(groups)]


@dataclass(frozen=True)
class CornerArc:
    """One circle or arc of a corner-class link, as (triangle, corner) steps."""

    steps: tuple[tuple[int, int], ...]
    closed: bool


class Tri2Complex:
    """A triangulated 2-complex: triangles plus edge gluings.

    `corner_labels`, when given, further identifies corner classes (two
    corners with the same label are the same vertex even if no gluing chain
    connects them). Labels are stringified.
    """

    def __init__(
        self,
        n_triangles: int,
        gluings: Iterable[tuple[int, int, int, int, Sequence[int]]] = (),
        corner_labels: Optional[Sequence[Sequence[object]]] = None,
    ):
        self.n = int(n_triangles)
        self._glue: dict[tuple[int, int], tuple[int, int, tuple[int, int]]] = {}
        for t, e, t2, e2, perm in gluings:
            self._add_gluing(t, e, t2, e2, tuple(perm))
        if corner_labels is not None:
            if len(corner_labels) != self.n:
                raise FormatError("corner_labels must list one triple per triangle")
            self._labels_in = [tuple(str(x) for x in row) for row in corner_labels]
        else:
            self._labels_in = None
        self._build()

    def _add_gluing(self, t, e, t2, e2, perm):
        for tt, ee in ((t, e), (t2, e2)):
            if not (0 <= tt < self.n and 0 <= ee < 3):
                raise FormatError(f"invalid edge slot ({tt},{ee})")
        if (t, e) == (t2, e2):
            raise SelfGluedFace(f"edge ({t},{e}) glued to itself")
        if sorted(perm) != [0, 1]:
            raise BadPermutation(f"bad 2-permutation {perm}")
        inv = (perm.index(0), perm.index(1))
        for key, val in (((t, e), (t2, e2, perm)), ((t2, e2), (t, e, inv))):
            if key in self._glue and self._glue[key] != val:
                raise SlotReused(f"edge slot {key} glued twice")
        self._glue[(t, e)] = (t2, e2, perm)
        self._glue[(t2, e2)] = (t, e, inv)

    # --- construction helpers -------------------------------------------

    @classmethod
    def from_triangle_tuples(cls, triples: Sequence[Sequence[object]]) -> "Tri2Complex":
        """Build a simplicial 2-complex from vertex-label triples.

        Gluings are inferred by matching shared label pairs; a pair occurring
        in three or more triangles is rejected.
        """
        labels = [tuple(str(x) for x in row) for row in triples]
        for row in labels:
            if len(row) != 3 or len(set(row)) != 3:
                raise FormatError(f"triangle {row} must have 3 distinct labels")
        by_pair: dict[tuple[str, str], list[tuple[int, int]]] = {}
        for t, row in enumerate(labels):
            for e in range(3):
                a, b = (row[c] for c in EDGE_CORNERS[e])
                key = (a, b) if a <= b else (b, a)
                by_pair.setdefault(key, []).append((t, e))
        gluings = []
        for key, slots in sorted(by_pair.items()):
            if len(slots) > 2:
                raise TripleOvershared(f"edge {key} lies in {len(slots)} triangles")
            if len(slots) == 2:
                (t, e), (t2, e2) = slots
                src = [labels[t][c] for c in EDGE_CORNERS[e]]
                dst = [labels[t2][c] for c in EDGE_CORNERS[e2]]
                perm = tuple(dst.index(x) for x in src)
                gluings.append((t, e, t2, e2, perm))
        return cls(len(labels), gluings, corner_labels=labels)

    # --- derived structure ----------------------------------------------

    def _build(self):
        n = self.n
        uf = UnionFind(3 * n)
        for (t, e), (t2, e2, perm) in self._glue.items():
            if (t, e) > (t2, e2):
                continue
            for i in range(2):
                uf.union(3 * t + EDGE_CORNERS[e][i], 3 * t2 + EDGE_CORNERS[e2][perm[i]])
        if self._labels_in is not None:
            rep_of_label: dict[str, int] = {}
            for t in range(n):
                for c in range(3):
                    lbl = self._labels_in[t][c]
                    if lbl in rep_of_label:
                        uf.union(rep_of_label[lbl], 3 * t + c)
                    else:
                        rep_of_label[lbl] = 3 * t + c
        self.corner_classes: list[tuple[int, ...]] = uf.classes()
        self._corner_class_of = [0] * (3 * n)
        for ci, slots in enumerate(self.corner_classes):
            for s in slots:
                self._corner_class_of[s] = ci
        if self._labels_in is not None:
            self.vertex_labels = [
                min(self._labels_in[s // 3][s % 3] for s in slots)
                for slots in self.corner_classes
            ]
        else:
            self.vertex_labels = [f"s{ci}" for ci in range(len(self.corner_classes))]

        # Edge classes: glued pairs and boundary singletons.
        self.edge_classes: list[tuple[tuple[int, int], ...]] = []
        self._edge_class_of: dict[tuple[int, int], int] = {}
        for t in range(n):
            for e in range(3):
                if (t, e) in self._edge_class_of:
                    continue
                other = self._glue.get((t, e))
                cls_slots = ((t, e),) if other is None else ((t, e), other[:2])
                idx = len(self.edge_classes)
                self.edge_classes.append(cls_slots)
                for slot in cls_slots:
                    self._edge_class_of[slot] = idx
        self.boundary_edges = tuple(
            i for i, slots in enumerate(self.edge_classes) if len(slots) == 1
        )

        # Components under triangle adjacency through glued edges. These are
        # the components of the normalized surface; raw components additionally
        # connect through shared vertices.
        tuf = UnionFind(max(n, 1))
        for (t, e), (t2, _e2, _p) in self._glue.items():
            tuf.union(t, t2)
        self._tri_component_of = [tuf.find(t) for t in range(n)]
        comp_reps = sorted(set(self._tri_component_of))
        self._comp_index = {r: i for i, r in enumerate(comp_reps)}
        self.n_components = len(comp_reps)

    # --- basic queries ----------------------------------------------------

    def gluing(self, t: int, e: int):
        return self._glue.get((t, e))

    def corner_class(self, t: int, c: int) -> int:
        return self._corner_class_of[3 * t + c]

    def edge_class(self, t: int, e: int) -> int:
        return self._edge_class_of[(t, e)]

    def component_of_triangle(self, t: int) -> int:
        return self._comp_index[self._tri_component_of[t]]

    @property
    def is_closed(self) -> bool:
        return self.n > 0 and not self.boundary_edges

    def counts(self) -> tuple[int, int, int]:
        return (len(self.corner_classes), len(self.edge_classes), self.n)

    def euler_characteristic(self) -> int:
        v, e, f = self.counts()
        return v - e + f

    # --- corner links -----------------------------------------------------

    def corner_link(self, corner_class: int) -> list[CornerArc]:
        """Circles/arcs of triangle corners around one vertex class.

        Pivot: sitting at corner c of triangle t and leaving through edge e
        (one of the two edges at c), cross the gluing and continue through the
        other edge at the image corner. Each (triangle, corner) incidence is
        visited exactly once across all circles/arcs.
        """
        pending = set(self.corner_classes[corner_class])
        out: list[CornerArc] = []

        def step(t, c, e):
            g = self._glue.get((t, e))
            if g is None:
                return None
            t2, e2, perm = g
            i = EDGE_CORNERS[e].index(c)
            c2 = EDGE_CORNERS[e2][perm[i]]
            e_next = 3 - c2 - e2  # the other edge at c2
            return (t2, c2, e_next)

        while pending:
            s0 = min(pending)
            t0, c0 = divmod(s0, 3)
            ea, eb = [e for e in range(3) if e != c0]
            steps = [(t0, c0)]
            pending.discard(s0)
            closed = False
            state = (t0, c0, eb)
            while True:
                nxt = step(*state)
                if nxt is None:
                    break
                if (nxt[0], nxt[1]) == (t0, c0):
                    closed = True
                    break
                steps.append((nxt[0], nxt[1]))
                pending.discard(3 * nxt[0] + nxt[1])
                state = nxt
            if not closed:
                state = (t0, c0, ea)
                prefix = []
                while True:
                    nxt = step(*state)
                    if nxt is None:
                        break
                    prefix.append((nxt[0], nxt[1]))
                    pending.discard(3 * nxt[0] + nxt[1])
                    state = nxt
                steps = list(reversed(prefix)) + steps
            out.append(CornerArc(tuple(steps), closed))
        return out

    # --- orientability ----------------------------------------------------

    def orientable_components(self) -> list[bool]:
        """Orientability of each triangle-adjacency component.

        Assigns each triangle a sign and checks every gluing reverses the
        induced edge direction; a contradiction marks the component
        non-orientable. The cyclic corner order 0->1->2 runs ascending along
        EDGE_CORNERS[e] for e in {0, 2} and descending for e = 1.
        """
        sign = [0] * self.n
        ok = [True] * self.n_components
        for start in range(self.n):
            if sign[start]:
                continue
            sign[start] = 1
            stack = [start]
            while stack:
                t = stack.pop()
                for e in range(3):
                    g = self._glue.get((t, e))
                    if g is None:
                        continue
                    t2, e2, perm = g
                    s_perm = 1 if perm == (0, 1) else -1
                    dir1 = 1 if e != 1 else -1
                    dir2 = 1 if e2 != 1 else -1
                    want = -sign[t] * s_perm * dir1 * dir2
                    if sign[t2] == 0:
                        sign[t2] = want
                        stack.append(t2)
                    elif sign[t2] != want:
                        ok[self.component_of_triangle(t)] = False
        return ok

    # --- canonical form / isomorphism --------------------------------------

    _PERMS3 = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))

    def _encode(self, start: int, perm0: tuple[int, int, int]):
        """Canonical-candidate encoding by BFS relabeling from one start.

        Covers the component of `start` only. When a gluing leads to an unseen
        triangle, the new triangle is relabeled so the gluing becomes trivial
        and only an 'n' token is emitted; back references record the full
        permutation.
        """
        order = [start]
        pos = {start: 0}
        relab = {start: perm0}  # triangle -> (old corner -> new corner)
        tokens: list[str] = []
        qi = 0
        while qi < len(order):
            t = order[qi]
            qi += 1
            pi = relab[t]
            inv = [0, 0, 0]
            for old, new in enumerate(pi):
                inv[new] = old
            for g_new in range(3):
                e_old = inv[g_new]
                g = self._glue.get((t, e_old))
                if g is None:
                    tokens.append("b")
                    continue
                t2, e2, perm = g
                if t2 not in relab:
                    pi2 = [0, 0, 0]
                    for i2 in range(2):
                        src = EDGE_CORNERS[e_old][i2]
                        dst = EDGE_CORNERS[e2][perm[i2]]
                        pi2[dst] = pi[src]
                    pi2[e2] = g_new
                    relab[t2] = tuple(pi2)
                    pos[t2] = len(order)
                    order.append(t2)
                    tokens.append("n")
                else:
                    pi2 = relab[t2]
                    pairs = []
                    for i2 in range(2):
                        src = EDGE_CORNERS[e_old][i2]
                        dst = EDGE_CORNERS[e2][perm[i2]]
                        pairs.append((pi[src], pi2[dst]))
                    pairs.sort()  # source corners in new-label order
                    tokens.append(f"g{pos[t2]}.{pi2[e2]}.{pairs[0][1]}{pairs[1][1]}")
        return ",".join(tokens), pos, relab

    def _component_candidates(self, tris: list[int]):
        best = None
        for start in tris:
            for p0 in self._PERMS3:
                enc, new_index, relab = self._encode(start, p0)
                if best is None or enc < best[0]:
                    best = (enc, new_index, relab)
        return best

    def _canonical(self):
        comps: dict[int, list[int]] = {}
        for t in range(self.n):
            comps.setdefault(self._tri_component_of[t], []).append(t)
        picks = [self._component_candidates(tris) for tris in comps.values()]
        picks.sort(key=lambda x: (len(x[1]), x[0]))
        new_index: dict[int, int] = {}
        relab: dict[int, tuple[int, int, int]] = {}
        parts = []
        offset = 0
        for enc, idx, rl in picks:
            parts.append(enc)
            for t, i in idx.items():
                new_index[t] = offset + i
            relab.update(rl)
            offset += len(idx)
        # Corner-class partition in canonical coordinates (captures label
        # coarsening beyond the gluing orbits).
        part = sorted(
            tuple(sorted(3 * new_index[s // 3] + relab[s // 3][s % 3] for s in slots))
            for slots in self.corner_classes
        )
        canon = ";".join(parts) + "|" + repr(part)
        return canon, new_index, relab

    def canonical_form(self) -> str:
        """Canonical string: equal iff the complexes are isomorphic."""
        return self._canonical()[0]

    def find_isomorphism(self, other: "Tri2Complex"):
        """Triangle/corner correspondence self -> other, or None.

        Returned as dict t -> (t2, corner map tuple m) with m[c] the image
        corner in t2 of corner c of t.
        """
        c1, idx1, rl1 = self._canonical()
        c2, idx2, rl2 = other._canonical()
        if c1 != c2:
            return None
        inv_idx2 = {i: t for t, i in idx2.items()}
        mapping = {}
        for t in range(self.n):
            t2 = inv_idx2[idx1[t]]
            p1 = rl1[t]
            p2 = rl2[t2]
            inv_p2 = [0, 0, 0]
            for old, new in enumerate(p2):
                inv_p2[new] = old
            mapping[t] = (t2, tuple(inv_p2[p1[c]] for c in range(3)))
        return mapping


def product_with_circle(surface: Tri2Complex, p: int, level_label=None):
    """Triangulate (2-complex) x (circle of p segments) by prism staircases.

    Each triangle crossed with one segment yields three tetrahedra; the
    staircase diagonal on every quadrilateral runs from the lower-class bottom
    vertex to the higher-class top vertex, so neighboring prisms agree on
    shared quads. Requires p >= 2 and three distinct corner classes per
    triangle. Returns a Triangulation.
    """
    from .tri_core import Triangulation

    if p < 2:
        raise FormatError("product requires p >= 2 circle segments")
    S = surface
    if level_label is None:
        def level_label(lbl, l):
            return f"{lbl}@{l}"

    # Per triangle: corner positions sorted by corner class, roles a < b < c.
    tri_order = []
    for t in range(S.n):
        classes = [S.corner_class(t, c) for c in range(3)]
        if len(set(classes)) != 3:
            raise FormatError("product base must have 3 distinct vertices per triangle")
        tri_order.append(tuple(sorted(range(3), key=lambda c: classes[c])))

    # Prism over triangle t between levels l, l+1 with ordered corners a,b,c:
    #   T0 = (a_l, b_l, c_l, c_l1), T1 = (a_l, b_l, b_l1, c_l1),
    #   T2 = (a_l, a_l1, b_l1, c_l1)   (slots in the listed order).
    # Slot tokens as (role, level offset), roles 0=a, 1=b, 2=c.
    TOKENS = (
        ((0, 0), (1, 0), (2, 0), (2, 1)),
        ((0, 0), (1, 0), (1, 1), (2, 1)),
        ((0, 0), (0, 1), (1, 1), (2, 1)),
    )

    def tet(t, l, i):
        return 3 * (t * p + (l % p)) + i

    def class_tokens(t, toks):
        return tuple((S.corner_class(t, tri_order[t][r]), o) for r, o in toks)

    labels = []
    for t in range(S.n):
        names = [S.vertex_labels[S.corner_class(t, c)] for c in tri_order[t]]
        for l in range(p):
            l1 = (l + 1) % p
            la, lb, lc = names
            labels.append((level_label(la, l), level_label(lb, l), level_label(lc, l), level_label(lc, l1)))
            labels.append((level_label(la, l), level_label(lb, l), level_label(lb, l1), level_label(lc, l1)))
            labels.append((level_label(la, l), level_label(la, l1), level_label(lb, l1), level_label(lc, l1)))

    gluings = []

    def glue_tokens(tA, toksA, tB, toksB, face_tokens):
        """Glue the faces of tA/tB whose slot tokens realize face_tokens."""
        want = set(face_tokens)
        fA = next(s for s in range(4) if toksA[s] not in want)
        fB = next(s for s in range(4) if toksB[s] not in want)
        sA = [s for s in range(4) if s != fA]
        sB = [s for s in range(4) if s != fB]
        whereB = {toksB[s]: i for i, s in enumerate(sB)}
        perm = tuple(whereB[toksA[s]] for s in sA)
        gluings.append((tA, fA, tB, fB, perm))

    for t in range(S.n):
        ct = lambda toks: class_tokens(t, toks)
        a, b, c = (S.corner_class(t, tri_order[t][r]) for r in range(3))
        for l in range(p):
            T0, T1, T2 = (tet(t, l, i) for i in range(3))
            glue_tokens(T0, ct(TOKENS[0]), T1, ct(TOKENS[1]), ((a, 0), (b, 0), (c, 1)))
            glue_tokens(T1, ct(TOKENS[1]), T2, ct(TOKENS[2]), ((a, 0), (b, 1), (c, 1)))
            # top of this prism to bottom of the next level's T0
            shifted = tuple((cls, o + 1) for cls, o in ct(TOKENS[0]))
            glue_tokens(T2, ct(TOKENS[2]), tet(t, l + 1, 0), shifted, ((a, 1), (b, 1), (c, 1)))

    # Side quads over glued surface edges. The quad over edge (u, w), u < w by
    # class, splits into (u_l, w_l, w_l1) and (u_l, u_l1, w_l1); the prism tet
    # carrying each piece depends on the roles of u, w in its triangle.
    PIECES = {(1, 2): (0, 1), (0, 1): (1, 2), (0, 2): (0, 2)}
    for t in range(S.n):
        for e in range(3):
            g = S.gluing(t, e)
            if g is None:
                continue
            t2, e2, _perm = g
            if (t2, e2) < (t, e):
                continue
            u, w = sorted(S.corner_class(t, c) for c in EDGE_CORNERS[e])
            rolesA = tuple(sorted(tri_order[t].index(c) for c in EDGE_CORNERS[e]))
            cs2 = tuple(EDGE_CORNERS[e2][_perm[i]] for i in range(2))
            rolesB = tuple(sorted(tri_order[t2].index(c) for c in cs2))
            piece_tokens = (((u, 0), (w, 0), (w, 1)), ((u, 0), (u, 1), (w, 1)))
            for l in range(p):
                for piece in range(2):
                    iA = PIECES[rolesA][piece]
                    iB = PIECES[rolesB][piece]
                    glue_tokens(
                        tet(t, l, iA),
                        class_tokens(t, TOKENS[iA]),
                        tet(t2, l, iB),
                        class_tokens(t2, TOKENS[iB]),
                        piece_tokens[piece],
                    )

    return Triangulation(3 * S.n * p, gluings, labels=labels)
