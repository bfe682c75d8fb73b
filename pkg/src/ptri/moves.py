"""Bistellar (Pachner) moves on generalized triangulations.

All four moves replace a small cluster of tetrahedra by another cluster with
the same boundary. The rebuild helper reconnects the surrounding gluings
through explicit covers (old boundary face -> new face with a slot map), so
self-adjacent clusters and extra edge identifications survive the surgery.
Moves never touch singular simplices: the 3-2 move refuses singular edges and
the 4-1 move requires a 4-triangle sphere link, so the natural skeleton and
its Gamma-signature are preserved verbatim.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .errors import (
    BoundaryFace,
    EdgeDegreeNot3,
    LinkNotSphere,
    MoveError,
    NoLegalMove,
    NotFourValent,
    RepeatedTetrahedron,
    SameTetrahedron,
    SingularEdge,
)
from .tri_core import EDGE_PAIRS, FACE_VERTS, Triangulation, _edge_index


@dataclass(frozen=True)
class MoveDescriptor:
    kind: str  # m14 | m41 | m23 | m32
    target: int  # tet id (m14), vertex class (m41), face class (m23), edge class (m32)


def _fresh_vertex_label(t: Triangulation) -> str:
    taken = set(t.vertex_labels)
    i = 0
    while f"o{i}" in taken:
        i += 1
    return f"o{i}"


def _rebuild(t, removed, new_labels, internal, covers):
    """Assemble the moved triangulation.

    removed: ordered list of old tet ids to drop;
    new_labels: vertex-label rows of the new tetrahedra (local indices);
    internal: gluings among new tetrahedra, local indices;
    covers: (old_tet, old_face) -> (local_new, new_face, {old_slot: new_slot})
    for every boundary face of the removed cluster.
    """
    removed_set = set(removed)
    keep = [x for x in range(t.n_tets) if x not in removed_set]
    new_of_old = {x: i for i, x in enumerate(keep)}
    base = len(keep)

    def cover_side(tt, ff):
        loc, nf, smap = covers[(tt, ff)]
        return base + loc, nf, smap

    gluings = []
    for (a, f, b, f2, perm) in t.gluings_list():
        a_rm, b_rm = a in removed_set, b in removed_set
        if not a_rm and not b_rm:
            gluings.append((new_of_old[a], f, new_of_old[b], f2, perm))
            continue
        if a_rm and (a, f) not in covers:
            continue  # interior face of the cluster, dropped with it
        if b_rm and (b, f2) not in covers:
            continue
        fv, fv2 = FACE_VERTS[f], FACE_VERTS[f2]
        if a_rm:
            na, nf, smap = cover_side(a, f)
            pairs_a = [(smap[fv[i]], i) for i in range(3)]
        else:
            na, nf = new_of_old[a], f
            pairs_a = [(fv[i], i) for i in range(3)]
        if b_rm:
            nb, nf2, smap2 = cover_side(b, f2)
            img = lambda i: smap2[fv2[perm[i]]]
        else:
            nb, nf2 = new_of_old[b], f2
            img = lambda i: fv2[perm[i]]
        nfv, nfv2 = FACE_VERTS[nf], FACE_VERTS[nf2]
        new_perm = [0, 0, 0]
        for slot_a, i in pairs_a:
            new_perm[nfv.index(slot_a)] = nfv2.index(img(i))
        gluings.append((na, nf, nb, nf2, tuple(new_perm)))

    gluings.extend(
        (base + a, f, base + b, f2, perm) for (a, f, b, f2, perm) in internal
    )

    labels = [t.labels_by_tet()[x] for x in keep] + [tuple(r) for r in new_labels]

    def map_edge(tt, e):
        if tt not in removed_set:
            return (new_of_old[tt], e)
        a, b = EDGE_PAIRS[e]
        for ff in range(4):
            if ff in (a, b) or (tt, ff) not in covers:
                continue
            loc, _nf, smap = covers[(tt, ff)]
            return (base + loc, _edge_index(smap[a], smap[b]))
        raise MoveError("edge identification lost by the move")

    merges = [
        (map_edge(*a), map_edge(*b)) for a, b in t.extra_edge_identifications()
    ]
    return Triangulation(base + len(new_labels), gluings, labels=labels, edge_merges=merges)


def _token_gluings(tet_tokens):
    """Gluings among new tets from matching 3-token face sets (each exactly twice)."""
    by_face = {}
    for loc, toks in enumerate(tet_tokens):
        for f in range(4):
            key = frozenset(toks[s] for s in range(4) if s != f)
            by_face.setdefault(key, []).append((loc, f))
    out = []
    for key, sides in sorted(by_face.items(), key=lambda kv: kv[1]):
        if len(sides) == 1:
            continue
        (a, f), (b, f2) = sides
        toks_a, toks_b = tet_tokens[a], tet_tokens[b]
        sa = [s for s in range(4) if s != f]
        sb = [s for s in range(4) if s != f2]
        where = {toks_b[s]: i for i, s in enumerate(sb)}
        out.append((a, f, b, f2, tuple(where[toks_a[s]] for s in sa)))
    return out


def move_14(t: Triangulation, tet: int) -> Triangulation:
    """Replace one tetrahedron by four around a new interior vertex."""
    if not (0 <= tet < t.n_tets):
        raise MoveError(f"no tetrahedron {tet}")
    apex = _fresh_vertex_label(t)
    row = t.labels_by_tet()[tet]
    tokens = []
    labels = []
    for f in range(4):
        toks = ("O",) + tuple(("V", s) for s in FACE_VERTS[f])
        tokens.append(toks)
        labels.append((apex,) + tuple(row[s] for s in FACE_VERTS[f]))
    internal = _token_gluings(tokens)
    covers = {
        (tet, f): (f, 0, {FACE_VERTS[f][i]: i + 1 for i in range(3)})
        for f in range(4)
    }
    return _rebuild(t, [tet], labels, internal, covers)


def move_41(t: Triangulation, v: int) -> Triangulation:
    """Collapse the four tetrahedra around a 4-valent interior vertex."""
    if not (0 <= v < len(t.vertex_classes)):
        raise MoveError(f"no vertex class {v}")
    corners = sorted(divmod(s, 4) for s in t.vertex_classes[v])
    if len(corners) != 4 or len({c[0] for c in corners}) != 4:
        raise NotFourValent(
            f"vertex {t.vertex_labels[v]} does not lie in exactly 4 distinct tetrahedra"
        )
    # link-vertex tokens: edge-end classes at v, one per (corner, direction)
    tok = {}
    for (tt, s) in corners:
        for w in range(4):
            if w == s:
                continue
            e = _edge_index(s, w)
            end = 0 if s < w else 1
            tok[(tt, w)] = t._edge_end_uf.find(12 * tt + 2 * e + end)
        for w in range(4):
            if w != s and t.gluing(tt, w) is None:
                raise LinkNotSphere("vertex link touches the boundary")
    all_tokens = sorted(set(tok.values()))
    counts = {x: 0 for x in all_tokens}
    for x in tok.values():
        counts[x] += 1
    per_corner_ok = all(
        len({tok[(tt, w)] for w in range(4) if w != s}) == 3 for (tt, s) in corners
    )
    if len(all_tokens) != 4 or not per_corner_ok or any(c != 3 for c in counts.values()):
        raise LinkNotSphere(f"link of {t.vertex_labels[v]} is not the 4-triangle sphere")
    slot_of_token = {x: i for i, x in enumerate(all_tokens)}
    label_row = [None] * 4
    for (tt, w), x in tok.items():
        label_row[slot_of_token[x]] = t.label_of_slot(tt, w)
    covers = {}
    for (tt, s) in corners:
        missing = next(
            x for x in all_tokens if x not in {tok[(tt, w)] for w in range(4) if w != s}
        )
        smap = {w: slot_of_token[tok[(tt, w)]] for w in range(4) if w != s}
        covers[(tt, s)] = (0, slot_of_token[missing], smap)
    return _rebuild(t, [c[0] for c in corners], [tuple(label_row)], [], covers)


def move_23(t: Triangulation, face: int) -> Triangulation:
    """Replace two tetrahedra sharing a face by three around a fresh edge."""
    if not (0 <= face < len(t.face_classes)):
        raise MoveError(f"no face class {face}")
    slots = t.face_classes[face]
    if len(slots) == 1:
        raise BoundaryFace("2-3 move needs an interior face")
    (t1, f1), (t2, f2) = slots
    if t1 == t2:
        raise SameTetrahedron("2-3 move needs two distinct tetrahedra")
    _t2, _f2, perm = t.gluing(t1, f1)
    fv1, fv2 = FACE_VERTS[f1], FACE_VERTS[f2]
    row1, row2 = t.labels_by_tet()[t1], t.labels_by_tet()[t2]
    pairs = ((1, 2), (0, 2), (0, 1))  # V-index pairs per new tet
    labels = []
    tokens = []
    for k in range(3):
        i, j = pairs[k]
        tokens.append((("A",), ("A2",), ("V", i), ("V", j)))
        labels.append((row1[f1], row2[f2], row1[fv1[i]], row1[fv1[j]]))
    internal = _token_gluings(tokens)
    covers = {}
    for k in range(3):
        i, j = pairs[k]
        # face of t1 opposite vertex fv1[k]
        covers[(t1, fv1[k])] = (k, 1, {f1: 0, fv1[i]: 2, fv1[j]: 3})
        covers[(t2, fv2[perm[k]])] = (
            k,
            0,
            {f2: 1, fv2[perm[i]]: 2, fv2[perm[j]]: 3},
        )
    return _rebuild(t, sorted({t1, t2}), labels, internal, covers)


def move_32(t: Triangulation, edge: int) -> Triangulation:
    """Replace the three tetrahedra around a 3-valent edge by two."""
    if not (0 <= edge < len(t.edge_classes)):
        raise MoveError(f"no edge class {edge}")
    info = t.edge_link(edge)
    if len(info.circles) + len(info.arcs) > 1 or info.arcs:
        if len(info.circles) >= 2:
            raise SingularEdge("3-2 move refuses singular edges")
        raise EdgeDegreeNot3("3-2 move needs an interior edge")
    circle = info.circles[0]
    if len(circle) != 3:
        raise EdgeDegreeNot3(f"edge link circle has length {len(circle)}")
    tets = [s.tet for s in circle]
    if len(set(tets)) != 3:
        raise RepeatedTetrahedron("3-2 move needs three distinct tetrahedra")
    # outer vertex c_i sits at slot face_in of step i and slot face_out of
    # step i+1 (crossing the exit face of step i identifies them)
    steps = list(circle)
    row = t.labels_by_tet()
    label_A = row[steps[0].tet][steps[0].a]
    label_B = row[steps[0].tet][steps[0].b]
    c_labels = [row[s.tet][s.face_in] for s in steps]
    labels = [
        (label_A, c_labels[0], c_labels[1], c_labels[2]),
        (label_B, c_labels[0], c_labels[1], c_labels[2]),
    ]
    internal = [(0, 0, 1, 0, (0, 1, 2))]  # shared face (c0, c1, c2)
    covers = {}
    for i, s in enumerate(steps):
        prev = (i - 1) % 3
        # faces of the strip tet not containing the edge: opposite a, opposite b
        # slot face_in holds c_i, slot face_out holds c_{i-1}
        covers[(s.tet, s.a)] = (
            1,
            1 + ((i + 1) % 3),
            {s.b: 0, s.face_in: 1 + i, s.face_out: 1 + prev},
        )
        covers[(s.tet, s.b)] = (
            0,
            1 + ((i + 1) % 3),
            {s.a: 0, s.face_in: 1 + i, s.face_out: 1 + prev},
        )
    return _rebuild(t, sorted(set(tets)), labels, internal, covers)


def apply_move(t: Triangulation, d: MoveDescriptor) -> Triangulation:
    return {"m14": move_14, "m41": move_41, "m23": move_23, "m32": move_32}[d.kind](
        t, d.target
    )


def _m41_legal(t, v) -> bool:
    try:
        corners = sorted(divmod(s, 4) for s in t.vertex_classes[v])
        if len(corners) != 4 or len({c[0] for c in corners}) != 4:
            return False
        move_41(t, v)
        return True
    except MoveError:
        return False


def _m32_legal(t, e) -> bool:
    circles, arcs = t._edge_chains()[e]
    if arcs or len(circles) != 1 or len(circles[0]) != 3:
        return False
    return len({s.tet for s in circles[0]}) == 3


def legal_moves(t: Triangulation, weights=None) -> list[MoveDescriptor]:
    """All currently legal moves with positive weight, in deterministic order."""
    weights = weights or {}
    out = []
    if weights.get("m14", 1) > 0:
        out += [MoveDescriptor("m14", x) for x in range(t.n_tets)]
    if weights.get("m41", 1) > 0:
        out += [
            MoveDescriptor("m41", v)
            for v in range(len(t.vertex_classes))
            if _m41_legal(t, v)
        ]
    if weights.get("m23", 1) > 0:
        out += [
            MoveDescriptor("m23", f)
            for f, slots in enumerate(t.face_classes)
            if len(slots) == 2 and slots[0][0] != slots[1][0]
        ]
    if weights.get("m32", 1) > 0:
        out += [
            MoveDescriptor("m32", e)
            for e in range(len(t.edge_classes))
            if _m32_legal(t, e)
        ]
    return out


def random_walk(
    t: Triangulation,
    steps: int,
    seed: int,
    weights: Optional[dict] = None,
    snapshot=None,
):
    """Apply `steps` weighted random legal moves with a seeded generator.

    Returns (final, trace). `snapshot(i, t)` is called after every step when
    given. Weights map move kinds to nonnegative floats; a kind's candidates
    all carry its weight.
    """
    weights = dict(weights or {})
    rng = random.Random(seed)
    trace = []
    cur = t
    for i in range(steps):
        moves = legal_moves(cur, weights)
        if not moves:
            raise NoLegalMove("no legal move under the given weights")
        w = [weights.get(m.kind, 1.0) for m in moves]
        total = sum(w)
        x = rng.random() * total
        acc = 0.0
        chosen = moves[-1]
        for mv, wt in zip(moves, w):
            acc += wt
            if x < acc:
                chosen = mv
                break
        cur = apply_move(cur, chosen)
        trace.append(chosen)
        if snapshot is not None:
            snapshot(i, cur)
    return cur, trace
