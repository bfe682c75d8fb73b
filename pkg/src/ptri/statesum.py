"""The state-sum invariant: coloring enumeration and contraction.

The sum runs over per-edge colorings (every simple object is self-dual, so
all link circles of an edge share its color); a coloring contributes the
product of its edge dimensions and tetrahedron 6j-weights, and the total
carries the global factor (rank^2)^(-a) with a the number of vertices.

The contraction core is a backward dynamic program over a fixed edge order:
the value of a partial state depends only on the colors of the separator
(edges still referenced by unfinished faces or tetrahedra), so admissible
branches are shared instead of enumerated. Accumulation over colors happens
per node in ascending color order, which makes the result independent of how
the work is partitioned: the jobs parameter splits the sum by the colors of
the first ceil(log2(jobs)) edges and folds the partial results through the
identical accumulation tree, so jobs=1 and jobs=8 agree bit for bit.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import NotClosed, Overflow
from .moves import random_walk
from .pseudo_analysis import same_gamma_class, skeletons
from .quantum_algebra import QuantumParams
from .tri_core import EDGE_PAIRS, FACE_VERTS, Triangulation, _edge_index

#: sixj key (i,j,k,l,m,n) = edge colors (AB, BC, AC, CD, AD, BD); position of
#: each in the EDGE_PAIRS order (AB, AC, AD, BC, BD, CD).
KEY_FROM_EPAIR = (0, 3, 1, 5, 2, 4)

#: the three edges of face f, as tet-edge indices
FACE_EDGES = tuple(
    tuple(
        _edge_index(fv[i], fv[j])
        for (i, j) in ((0, 1), (0, 2), (1, 2))
    )
    for fv in FACE_VERTS
)


@dataclass(frozen=True)
class Coloring:
    """Colors per edge class; the per-circle view is induced (self-dual)."""

    per_edge: tuple[int, ...]

    def per_circle(self, t: Triangulation) -> dict[tuple[int, int], int]:
        out = {}
        for ei, color in enumerate(self.per_edge):
            info = t.edge_link(ei)
            for ci in range(len(info.circles)):
                out[(ei, ci)] = color
        return out


@dataclass
class StateSumResult:
    value: complex
    vertex_count: int
    edge_count: int
    colorings_admissible: int
    branches_pruned: int
    branches_visited: int
    wall_time: float
    r: int
    root_exponent: int
    jobs: int


def tet_weight(t: Triangulation, tet: int, coloring, p: QuantumParams) -> complex:
    """6j-weight of one tetrahedron under a per-edge coloring.

    The key reads the edge colors in the order (AB, BC, AC, CD, AD, BD) for
    the slot labeling A,B,C,D = 0,1,2,3; by the tetrahedral symmetry of the
    6j-symbol the value does not depend on that labeling choice.
    """
    colors = coloring.per_edge if isinstance(coloring, Coloring) else coloring
    by_pair = [colors[t.edge_class_of(tet, e)] for e in range(6)]
    key = tuple(by_pair[KEY_FROM_EPAIR[i]] for i in range(6))
    return p.sixj(*key)


# --- contraction plan -------------------------------------------------------


def _interaction_adj(t: Triangulation):
    E = len(t.edge_classes)
    adj = [set() for _ in range(E)]
    for tet in range(t.n_tets):
        cls = t.tet_edge_classes(tet)
        for a in cls:
            for b in cls:
                if a != b:
                    adj[a].add(b)
    return adj


def _order_min_fill(adj):
    E = len(adj)
    adj = [set(x) for x in adj]
    remaining = set(range(E))
    elim = []
    while remaining:
        best = None
        for v in sorted(remaining):
            nbrs = adj[v] & remaining
            deg = len(nbrs)
            if best is not None and deg > best[0]:
                continue
            nl = sorted(nbrs)
            fill = sum(
                1
                for ii in range(len(nl))
                for jj in range(ii + 1, len(nl))
                if nl[jj] not in adj[nl[ii]]
            )
            key = (deg, fill, v)
            if best is None or key < best:
                best = key
        v = best[2]
        nbrs = sorted(adj[v] & remaining)
        for ii in range(len(nbrs)):
            for jj in range(ii + 1, len(nbrs)):
                adj[nbrs[ii]].add(nbrs[jj])
                adj[nbrs[jj]].add(nbrs[ii])
        remaining.discard(v)
        elim.append(v)
    return list(reversed(elim))


def _order_min_boundary(adj):
    """Greedy linear layout minimizing the running separator size."""
    E = len(adj)
    unplaced_deg = [len(adj[v]) for v in range(E)]
    placed = [False] * E
    boundary: set[int] = set()
    order = []
    for _ in range(E):
        if boundary:
            cands = sorted({x for q in boundary for x in adj[q] if not placed[x]})
        else:
            cands = [min(v for v in range(E) if not placed[v])]
        best = None
        for x in cands:
            removed = sum(
                1 for q in adj[x] if q in boundary and unplaced_deg[q] == 1
            )
            joins = 1 if unplaced_deg[x] > 0 else 0  # x keeps unplaced neighbors
            key = (len(boundary) - removed + joins, x)
            if best is None or key < best:
                best = key
        x = best[1]
        placed[x] = True
        order.append(x)
        for q in adj[x]:
            unplaced_deg[q] -= 1
        boundary = {q for q in (boundary | {x}) if any(not placed[r] for r in adj[q])}
    return order


def _order_width(order, adj):
    """(max, total) separator size of a linear layout."""
    pos = {e: i for i, e in enumerate(order)}
    E = len(order)
    last = list(range(E))
    for v in range(E):
        for w in adj[v]:
            last[pos[v]] = max(last[pos[v]], pos[w])
    sep = [
        sum(1 for q in range(d) if last[q] >= d) for d in range(E + 1)
    ]
    return max(sep), sum(sep)


def _order_tet_sweep(t: Triangulation, seed: int):
    """Edges in order of first appearance along a tetrahedron BFS sweep."""
    n = t.n_tets
    seen_t = [False] * n
    queue = [seed]
    seen_t[seed] = True
    order = []
    seen_e = set()
    qi = 0
    while True:
        if qi >= len(queue):
            rem = [x for x in range(n) if not seen_t[x]]
            if not rem:
                break
            queue.append(rem[0])
            seen_t[rem[0]] = True
        tet = queue[qi]
        qi += 1
        for e in t.tet_edge_classes(tet):
            if e not in seen_e:
                seen_e.add(e)
                order.append(e)
        for f in range(4):
            g = t.gluing(tet, f)
            if g is not None and not seen_t[g[0]]:
                seen_t[g[0]] = True
                queue.append(g[0])
    return order


def _order_tet_cut(t: Triangulation, seed: int):
    """Greedy tetrahedron layout minimizing the running edge cut.

    The separator lifetime of an edge spans from its first to its last
    tetrahedron in the layout, so the frontier equals the set of edges shared
    between placed and unplaced tetrahedra; each step places the tetrahedron
    that minimizes it.
    """
    n = t.n_tets
    tet_edges = [set(t.tet_edge_classes(x)) for x in range(n)]
    remaining_uses = {}
    for es in tet_edges:
        for e in es:
            remaining_uses[e] = remaining_uses.get(e, 0) + 1
    placed = [False] * n
    frontier: set[int] = set()
    layout = []
    adj_tets = [set() for _ in range(n)]
    for x in range(n):
        for f in range(4):
            g = t.gluing(x, f)
            if g is not None:
                adj_tets[x].add(g[0])
    cand_pool: set[int] = {seed}
    for _ in range(n):
        if not cand_pool:
            cand_pool = {next(x for x in range(n) if not placed[x])}
        best = None
        for x in sorted(cand_pool):
            gain = sum(
                1 for e in tet_edges[x] if e in frontier and remaining_uses[e] == 1
            )
            grow = sum(
                1
                for e in tet_edges[x]
                if e not in frontier and remaining_uses[e] > 1
            )
            key = (len(frontier) - gain + grow, x)
            if best is None or key < best:
                best = key
        x = best[1]
        placed[x] = True
        layout.append(x)
        cand_pool.discard(x)
        for y in adj_tets[x]:
            if not placed[y]:
                cand_pool.add(y)
        for e in tet_edges[x]:
            remaining_uses[e] -= 1
            if remaining_uses[e] == 0:
                frontier.discard(e)
            else:
                frontier.add(e)
    order = []
    seen = set()
    for x in layout:
        for e in t.tet_edge_classes(x):
            if e not in seen:
                seen.add(e)
                order.append(e)
    return order


def contraction_order(t: Triangulation) -> list[int]:
    """Assignment order for the contraction sweep.

    Candidates: reversed greedy elimination (min degree, fill tie-break), a
    greedy minimum-boundary linear layout, and tetrahedron-BFS sweeps from a
    few seeds; the one with the smallest running separator wins. Edges
    interact when they share a tetrahedron; correctness is order-independent,
    only cost varies.
    """
    adj = _interaction_adj(t)
    if not adj:
        return []
    cands = [_order_min_fill(adj), _order_min_boundary(adj)]
    n = t.n_tets
    if n <= 150:
        seeds = list(range(n))
    else:
        seeds = sorted({(k * n) // 16 for k in range(16)} | {n - 1})
    cands += [_order_tet_sweep(t, s) for s in seeds]
    cands += [_order_tet_cut(t, s) for s in seeds]
    keyed = [(_order_width(o, adj), i, o) for i, o in enumerate(cands)]
    keyed.sort(key=lambda x: (x[0], x[1]))
    return keyed[0][2]


@dataclass
class ContractionPlan:
    order: list[int]
    sep: list[list[int]]        # positions forming the state before depth d
    faces_at: list[list[tuple[int, int, int]]]   # sep indices, -1 = new color
    tets_at: list[list[tuple[int, ...]]]         # 6 sep indices per tet key
    child_src: list[list[int]]                   # sep[d+1] from sep[d] (+[-1])


def build_plan(t: Triangulation) -> ContractionPlan:
    order = contraction_order(t)
    pos = {e: i for i, e in enumerate(order)}
    E = len(order)

    face_pos = []
    seen_faces = set()
    for tet in range(t.n_tets):
        for f in range(4):
            fc = t.face_class_of(tet, f)
            if fc in seen_faces:
                continue
            seen_faces.add(fc)
            ps = sorted(pos[t.edge_class_of(tet, e)] for e in FACE_EDGES[f])
            face_pos.append(ps)
    tet_pos = []
    for tet in range(t.n_tets):
        by_pair = [pos[t.edge_class_of(tet, e)] for e in range(6)]
        tet_pos.append(tuple(by_pair[KEY_FROM_EPAIR[i]] for i in range(6)))

    last_needed = list(range(E))
    for ps in face_pos:
        for q in ps:
            last_needed[q] = max(last_needed[q], ps[-1])
    for key in tet_pos:
        top = max(key)
        for q in key:
            last_needed[q] = max(last_needed[q], top)

    sep = [[q for q in range(d) if last_needed[q] >= d] for d in range(E + 1)]

    faces_at = [[] for _ in range(E)]
    for ps in face_pos:
        d = ps[-1]
        idx = {q: i for i, q in enumerate(sep[d])}
        faces_at[d].append(tuple(idx[q] if q != d else -1 for q in ps))
    tets_at = [[] for _ in range(E)]
    for key in tet_pos:
        d = max(key)
        idx = {q: i for i, q in enumerate(sep[d])}
        tets_at[d].append(tuple(idx[q] if q != d else -1 for q in key))
    child_src = []
    for d in range(E):
        idx = {q: i for i, q in enumerate(sep[d])}
        child_src.append([idx[q] if q != d else -1 for q in sep[d + 1]])
    return ContractionPlan(order, sep, faces_at, tets_at, child_src)


# --- the sweep engine -------------------------------------------------------


class _Tables:
    def __init__(self, p: QuantumParams):
        B = p.r - 1
        self.B = B
        self.qdim = np.array([p.qdim(i) for i in range(B)], dtype=np.complex128)
        self.sixj = np.asarray(p.sixj_array(), dtype=np.complex128)
        adm = np.zeros(B * B * B, dtype=bool)
        for i in range(B):
            for j in range(B):
                for k in range(B):
                    adm[(i * B + j) * B + k] = p.admissible(i, j, k)
        self.adm = adm


def _sweep(t: Triangulation, plan: ContractionPlan, tables: _Tables,
           prefix: tuple[int, ...], branch_cap: int):
    """Forward reachability plus backward values below the fixed prefix.

    Returns (ok_depth, w_list, value, count, visited, pruned): ok_depth is the
    largest depth with a nonempty level (the prefix is admissible iff
    ok_depth >= len(prefix)); w_list holds the per-level weights along the
    prefix (np.complex128); value is the subtree value at depth len(prefix)
    with ancestor weights excluded; count the number of admissible
    completions.
    """
    B = tables.B
    E = len(plan.order)
    d0 = len(prefix)
    # states pack separator digits at power-of-2 offsets: shifts and masks
    # instead of division
    bits = max((B - 1).bit_length(), 1)
    mask = np.int64((1 << bits) - 1)
    max_digits = 62 // bits
    for d in range(E + 1):
        if len(plan.sep[d]) > max_digits:
            raise Overflow("contraction separator too wide to encode")

    visited = 0
    pruned = 0
    levels: list[np.ndarray] = [np.zeros(1, dtype=np.int64)]

    # digit positions actually consulted at each depth, extracted once per level
    used_idx = []
    for d in range(E):
        used = set()
        for tri in plan.faces_at[d]:
            used.update(i for i in tri if i >= 0)
        for key in plan.tets_at[d]:
            used.update(i for i in key if i >= 0)
        used.update(i for i in plan.child_src[d] if i >= 0)
        used_idx.append(sorted(used))

    def level_bases(d, states, need_tets=True):
        """Color-independent index bases; per color everything is one add."""
        digs = {i: (states >> (bits * i)) & mask for i in used_idx[d]}
        faces = []
        for tri in plan.faces_at[d]:
            base = np.zeros(states.shape, dtype=np.int64)
            mul = 0
            for place, i in zip((B * B, B, 1), tri):
                if i == -1:
                    mul += place
                else:
                    base = base + digs[i] * place
            faces.append((base, mul))
        tets = []
        if need_tets:
            for key in plan.tets_at[d]:
                base = np.zeros(states.shape, dtype=np.int64)
                mul = 0
                place = 1
                for q in reversed(key):
                    if q == -1:
                        mul += place
                    else:
                        base = base + digs[q] * place
                    place *= B
                tets.append((base, mul))
        cbase = np.zeros(states.shape, dtype=np.int64)
        cmul = np.int64(0)
        for k, src in enumerate(plan.child_src[d]):
            if src == -1:
                cmul += np.int64(1) << np.int64(bits * k)
            else:
                cbase = cbase + (digs[src] << np.int64(bits * k))
        return faces, tets, cbase, cmul

    def transitions(bases, c):
        faces, _tets, cbase, cmul = bases
        ok = None
        for base, mul in faces:
            term = tables.adm[base + c * mul]
            ok = term if ok is None else (ok & term)
        if ok is None:
            ok = np.ones(cbase.shape, dtype=bool)
        return ok, cbase + c * cmul

    def weights(bases, c):
        _faces, tets, cbase, _cmul = bases
        w = np.full(cbase.shape, tables.qdim[c], dtype=np.complex128)
        for base, mul in tets:
            w = w * tables.sixj[base + c * mul]
        return w

    ok_depth = 0
    for d in range(E):
        states = levels[-1]
        if states.size == 0:
            levels.append(states)
            continue
        ok_depth = d
        bases = level_bases(d, states, need_tets=False)
        colors = (prefix[d],) if d < d0 else tuple(range(B))
        kids = []
        for c in colors:
            ok, child = transitions(bases, c)
            visited += states.size
            pruned += int(states.size - int(ok.sum()))
            if ok.any():
                kids.append(child[ok])
        if visited > branch_cap:
            raise Overflow(f"branch-visit guard exceeded ({branch_cap})")
        nxt = (
            np.unique(np.concatenate(kids)) if kids else np.zeros(0, dtype=np.int64)
        )
        levels.append(nxt)
    if levels[E].size:
        ok_depth = E

    # backward values and exact admissible-coloring counts (int64, guarded)
    vals = np.ones(levels[E].shape, dtype=np.complex128)
    cnts = np.ones(levels[E].shape, dtype=np.int64)
    w_list: list = [None] * d0
    for d in range(E - 1, -1, -1):
        states = levels[d]
        nxt_states = levels[d + 1]
        new_vals = np.zeros(states.shape, dtype=np.complex128)
        new_cnts = np.zeros(states.shape, dtype=np.int64)
        if states.size and nxt_states.size:
            bases = level_bases(d, states)
            faces, tets, cbase, cmul = bases
            colors = (prefix[d],) if d < d0 else tuple(range(B))
            for c in colors:
                ok, child = transitions(bases, c)
                sel = np.flatnonzero(ok)
                if sel.size == 0:
                    continue
                idx = np.searchsorted(nxt_states, child[sel])
                idx = np.minimum(idx, nxt_states.size - 1)
                if d < d0:
                    w_list[d] = weights(bases, c)[0]
                    contrib = vals[idx]  # subtree value excludes ancestor weights
                else:
                    w = np.full(sel.shape, tables.qdim[c], dtype=np.complex128)
                    for base, mul in tets:
                        w = w * tables.sixj[base[sel] + c * mul]
                    contrib = w * vals[idx]
                new_vals[sel] = new_vals[sel] + contrib
                new_cnts[sel] = new_cnts[sel] + cnts[idx]
        if new_cnts.size and int(new_cnts.max(initial=0)) > (1 << 61):
            raise Overflow("admissible-coloring count exceeds the int64 range")
        vals, cnts = new_vals, new_cnts
    if levels[0].size and ok_depth == E:
        return ok_depth, w_list, vals[0], int(cnts[0]), visited, pruned
    return ok_depth, w_list, np.complex128(0), 0, visited, pruned


def _accumulate(B, children):
    """Per-node accumulation in ascending color order (the canonical tree)."""
    acc = np.complex128(0)
    for c in range(B):
        term = children.get(c)
        if term is not None:
            acc = acc + term
    return acc


def state_sum(
    t: Triangulation,
    p: QuantumParams,
    jobs: int = 1,
    branch_cap: int = 100_000_000,
) -> StateSumResult:
    """Evaluate the invariant of a closed pseudomanifold.

    value = (rank^2)^(-a) * sum over admissible colorings of
            prod_e qdim(color(e)) * prod_T sixj(T).
    """
    t0 = time.perf_counter()
    if not t.is_closed or t.has_reversed_edges():
        raise NotClosed("state sum needs a closed pseudomanifold")
    p.ensure_tables()
    tables = _Tables(p)
    plan = build_plan(t)
    B = tables.B
    E = len(plan.order)
    d0 = 0 if jobs <= 1 else min(max(math.ceil(math.log2(jobs)), 0), E)

    prefixes = list(itertools.product(range(B), repeat=d0))

    def run(prefix):
        return _sweep(t, plan, tables, prefix, branch_cap)

    if jobs > 1 and len(prefixes) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = dict(zip(prefixes, pool.map(run, prefixes)))
    else:
        results = {pref: run(pref) for pref in prefixes}

    visited = sum(r[4] for r in results.values())
    pruned = sum(r[5] for r in results.values())

    def fold(prefix):
        d = len(prefix)
        if d == d0:
            res = results[prefix]
            return (res[2], res[3]) if res[0] >= d0 else (None, 0)
        children = {}
        count = 0
        for c in range(B):
            sub, subcount = fold(prefix + (c,))
            if sub is None:
                continue
            count += subcount
            # weight at this level, from the first prefix-admissible partition
            ext = next(
                pref for pref in prefixes
                if pref[: d + 1] == prefix + (c,) and results[pref][0] >= d0
            )
            children[c] = results[ext][1][d] * sub
        if not children:
            return (None, 0)
        return _accumulate(B, children), count

    raw, count = fold(())
    if raw is None:
        raw = np.complex128(0)
    a = len(t.vertex_classes)
    factor = np.complex128(p.rank_squared()) ** np.int64(-a) if a else np.complex128(1)
    value = complex(factor * raw)
    return StateSumResult(
        value=value,
        vertex_count=a,
        edge_count=E,
        colorings_admissible=int(count),
        branches_pruned=pruned,
        branches_visited=visited,
        wall_time=time.perf_counter() - t0,
        r=p.r,
        root_exponent=p.root_exponent,
        jobs=jobs,
    )


def enumerate_colorings(
    t: Triangulation, p: QuantumParams
) -> Iterator[tuple[Coloring, complex]]:
    """Stream admissible colorings depth-first with face pruning.

    Yields (coloring, weight) with weight the coloring's contribution before
    the global rank factor. Literal enumeration: intended for small inputs
    and cross-checks; state_sum shares the order but contracts instead.
    """
    p.ensure_tables()
    plan = build_plan(t)
    order = plan.order
    E = len(order)
    B = p.r - 1
    colors_by_edge = [0] * len(order)
    assigned = [0] * E

    faces_chk = [[] for _ in range(E)]
    pos = {e: i for i, e in enumerate(order)}
    seen = set()
    for tet in range(t.n_tets):
        for f in range(4):
            fc = t.face_class_of(tet, f)
            if fc in seen:
                continue
            seen.add(fc)
            es = [t.edge_class_of(tet, e) for e in FACE_EDGES[f]]
            d = max(pos[e] for e in es)
            faces_chk[d].append(es)

    def weight(colors):
        w = complex(1)
        for ei in range(len(t.edge_classes)):
            w *= p.qdim(colors[ei])
        for tet in range(t.n_tets):
            w *= tet_weight(t, tet, colors, p)
        return w

    colors = [0] * len(t.edge_classes)

    def rec(d):
        if d == E:
            col = Coloring(tuple(colors))
            yield col, weight(colors)
            return
        e = order[d]
        for c in range(B):
            colors[e] = c
            if all(
                p.admissible(colors[a], colors[b], colors[cc])
                for (a, b, cc) in faces_chk[d]
            ):
                yield from rec(d + 1)

    yield from rec(0)


@dataclass
class InvarianceReport:
    values: list[complex]
    max_relative_deviation: float
    gamma_preserved: bool
    trace: list


def invariance_check(
    t: Triangulation,
    p: QuantumParams,
    steps: int,
    seed: int,
    weights: Optional[dict] = None,
    jobs: int = 1,
    stride: int = 1,
) -> InvarianceReport:
    """Walk randomly and compare state sums across walk snapshots.

    The Gamma-signature is compared at every step; the state sum is evaluated
    at the start, at every stride-th step, and at the final step.
    """
    base = state_sum(t, p, jobs=jobs)
    rep0 = skeletons(t)
    values = [base.value]
    gamma_ok = True
    snaps = []

    def snapshot(i, cur):
        snaps.append(cur)

    final, trace = random_walk(t, steps, seed, weights=weights, snapshot=snapshot)
    for i, cur in enumerate(snaps):
        if not same_gamma_class(rep0, skeletons(cur)):
            gamma_ok = False
        if (i + 1) % stride == 0 or i == len(snaps) - 1:
            values.append(state_sum(cur, p, jobs=jobs).value)
    # invariant values here are O(1); below magnitude 1 the deviation is
    # reported absolutely so exact zeros do not blow up the quotient
    scale = max(abs(base.value), 1.0)
    dev = max(abs(v - base.value) / scale for v in values)
    return InvarianceReport(values, dev, gamma_ok, trace)
