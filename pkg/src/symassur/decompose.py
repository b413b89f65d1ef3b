"""Symmetry-adapted Assur decompositions.

Components are the strongly connected components of an out-degree orientation
after all pins are collapsed into one ground vertex ``Z``. The condensation is
a partial order with ``Z`` as its sink; an arc ``C -> D`` means ``C`` rests on
``D``, so ``D`` lies below ``C``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ActionNotFree, NotIsostatic, VerificationFailed
from .graphs import CoveringGraph, Edge, GainGraph, Vertex, cover, quotient, vkey, PIN
from .group import Representation, make_schoenflies
from .orbit import OrbitMatrix, RANK_TOL, is_pinned_S_isostatic
from .orient import FORWARD, REVERSE, Orientation, s_directed_orientation, verify_orientation

GROUND = "Z"
OFFDIAG_TOL = 1e-12


@dataclass
class AssurDecomposition:
    components: dict
    """component name (smallest member id) -> tuple of member vertex ids"""
    block_edges: set
    """deduplicated arcs (upper component, lower component or ``Z``)"""
    linear_extension: list
    """component names, bottom (nearest the ground) first"""
    orientation: Orientation | None = field(default=None, repr=False)

    @property
    def component_of(self) -> dict:
        return {v: c for c, vs in self.components.items() for v in vs}

    def __len__(self):
        return len(self.components)

    def partition(self) -> set:
        return {frozenset(vs) for vs in self.components.values()}

    def below(self, c) -> set:
        """Components strictly below ``c`` (``Z`` excluded)."""
        succ = {}
        for a, b in self.block_edges:
            succ.setdefault(a, set()).add(b)
        seen, stack = set(), [c]
        while stack:
            x = stack.pop()
            for y in succ.get(x, ()):
                if y not in seen and y != GROUND:
                    seen.add(y)
                    stack.append(y)
        return seen

    def above(self, c) -> set:
        return {x for x in self.components if c in self.below(x)}

    def comparable(self, a, b) -> bool:
        return a == b or a in self.below(b) or b in self.below(a)

    def order_pairs(self) -> set:
        """The strict partial order as a set of ``(upper, lower)`` pairs of member sets."""
        name = self.components
        return {(frozenset(name[a]), frozenset(name[b])) for a in name for b in self.below(a)}

    def same_as(self, other: "AssurDecomposition") -> bool:
        return self.partition() == other.partition() and self.order_pairs() == other.order_pairs()

    def to_json(self) -> dict:
        return {
            "components": {c: list(vs) for c, vs in self.components.items()},
            "block_edges": sorted([list(e) for e in self.block_edges]),
            "linear_extension": list(self.linear_extension),
        }


def _tarjan(nodes: list, succ: dict) -> list:
    """Iterative Tarjan; returns SCCs in the order they complete (sinks first)."""
    index, low, on_stack = {}, {}, set()
    stack, out = [], []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            w = next(it, None)
            if w is not None:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp.append(x)
                    if x == v:
                        break
                out.append(comp)
    return out


def _linear_extension(names: list, block_edges: set) -> list:
    succ = {c: set() for c in names}
    for a, b in block_edges:
        if b != GROUND:
            succ[a].add(b)
    placed, order = set(), []
    while len(order) < len(names):
        ready = sorted((c for c in names if c not in placed and succ[c] <= placed), key=vkey)
        order.append(ready[0])
        placed.add(ready[0])
    return order


def scc_decomposition(gg: GainGraph, o: Orientation) -> AssurDecomposition:
    """Strongly connected components of the orientation, pins condensed to ``Z``."""
    if not verify_orientation(gg, o):
        raise ValueError("orientation does not have the required out-degrees")
    node = {v: (GROUND if gg.is_pin(v) else v) for v in gg.vertices}
    if GROUND in gg.inner:
        raise ValueError(f"vertex id {GROUND!r} is reserved for the ground")
    succ = {}
    for eid, s, t in o.arcs(gg):
        if s != t:
            succ.setdefault(node[s], set()).add(node[t])
    nodes = sorted(gg.inner, key=vkey) + [GROUND]
    succ = {k: sorted(v, key=vkey) for k, v in succ.items()}
    comps = [c for c in _tarjan(nodes, succ) if c != [GROUND]]
    components = {}
    for c in comps:
        members = tuple(sorted(c, key=vkey))
        components[members[0]] = members
    cof = {v: c for c, vs in components.items() for v in vs}
    cof[GROUND] = GROUND
    blocks = set()
    for eid, s, t in o.arcs(gg):
        a, b = cof[node[s]], cof[node[t]]
        if a != b:
            blocks.add((a, b))
    names = sorted(components, key=vkey)
    return AssurDecomposition(dict(sorted(components.items(), key=lambda kv: vkey(kv[0]))),
                              blocks, _linear_extension(names, blocks), o)


def decompose(gg: GainGraph, rng=None) -> AssurDecomposition:
    return scc_decomposition(gg, s_directed_orientation(gg, rng=rng))


def from_partition(parts, order=None) -> AssurDecomposition:
    """A decomposition with a prescribed partition and bottom-first order (for checks)."""
    comps = {}
    for p in parts:
        members = tuple(sorted(p, key=vkey))
        comps[members[0]] = members
    order = list(order) if order is not None else sorted(comps, key=vkey)
    return AssurDecomposition(comps, set(), order)


@dataclass
class BlockTriangular:
    matrix: np.ndarray
    row_order: list
    column_order: list
    row_blocks: list
    column_blocks: list
    max_offdiag: float
    verified: bool


def block_triangular_form(M: OrbitMatrix, gg: GainGraph, dec: AssurDecomposition,
                          atol: float = OFFDIAG_TOL) -> BlockTriangular:
    """Permute ``M`` along the linear extension (bottom block upper-left) and
    check that everything above the block diagonal vanishes.

    Each row goes to the highest component among its inner endpoints.
    """
    pos = {c: i for i, c in enumerate(dec.linear_extension)}
    cof = dec.component_of
    col_order, col_blocks = [], []
    for c in dec.linear_extension:
        start = len(col_order)
        for v in gg.inner:
            if cof[v] == c:
                col_order.extend(range(M.block(v).start, M.block(v).stop))
        col_blocks.append((start, len(col_order)))
    rows_by = [[] for _ in dec.linear_extension]
    for i, eid in enumerate(M.rows):
        e = gg.edge(eid)
        ends = [v for v in (e.tail, e.head) if not gg.is_pin(v)]
        rows_by[max(pos[cof[v]] for v in ends)].append(i)
    row_order, row_blocks = [], []
    for rs in rows_by:
        start = len(row_order)
        row_order.extend(rs)
        row_blocks.append((start, len(row_order)))
    P = M.matrix[np.ix_(row_order, col_order)]
    bad = []
    for k, (r0, r1) in enumerate(row_blocks):
        c1 = col_blocks[k][1]
        for i in range(r0, r1):
            for j in range(c1, P.shape[1]):
                if abs(P[i, j]) >= atol:
                    bad.append((M.rows[row_order[i]], M.columns[col_order[j]], float(P[i, j])))
    offdiag = max((abs(b[2]) for b in bad), default=0.0)
    if not bad:
        offdiag = 0.0
        for k, (r0, r1) in enumerate(row_blocks):
            if r1 > r0 and col_blocks[k][1] < P.shape[1]:
                offdiag = max(offdiag, float(np.max(np.abs(P[r0:r1, col_blocks[k][1]:]))))
    if bad:
        raise VerificationFailed(f"{len(bad)} entries above the block diagonal exceed {atol:g}; "
                                 f"first at row {bad[0][0]!r}, column {bad[0][1]}", bad)
    for k, c in enumerate(dec.linear_extension):
        nr = row_blocks[k][1] - row_blocks[k][0]
        nc = col_blocks[k][1] - col_blocks[k][0]
        if nr != nc:
            raise VerificationFailed(f"diagonal block of component {c!r} is {nr}x{nc}, not square")
    return BlockTriangular(P, [M.rows[i] for i in row_order], [M.columns[j] for j in col_order],
                           row_blocks, col_blocks, offdiag, True)


def is_S_assur(gg: GainGraph, trials: int = 5, seed: int = 0, tol: float = RANK_TOL) -> bool:
    """True iff ``gg`` is pinned S-isostatic and has a single component."""
    if not is_pinned_S_isostatic(gg, trials, seed, tol):
        raise NotIsostatic("graph is not pinned isostatic under its symmetry group")
    return len(decompose(gg)) == 1


def extended_component(gg: GainGraph, dec: AssurDecomposition, c) -> GainGraph:
    """A component together with its outgoing edges, their far ends re-pinned."""
    o = dec.orientation
    members = set(dec.components[c])
    edges = [gg.edge(eid) for eid, s, t in o.arcs(gg) if s in members]
    far = {v for e in edges for v in (e.tail, e.head)} - members
    verts = [gg.vertex(v) for v in gg.vertices if v in members]
    verts += [Vertex(v, PIN, gg.stabilizer(v)) for v in gg.vertices if v in far]
    return GainGraph(gg.rep, verts, edges)


# ---------------------------------------------------------------------------
# Lifting to the cover and projecting back
# ---------------------------------------------------------------------------

def trivial_rep(d: int) -> Representation:
    return make_schoenflies("Cn", 1, d)[1]


@dataclass
class LiftedDecomposition:
    cover: CoveringGraph
    gain_graph: GainGraph
    orientation: Orientation
    decomposition: AssurDecomposition
    parent: dict
    """covering component name -> quotient component name"""


def lift_orientation(gg: GainGraph, cg: CoveringGraph, o: Orientation) -> Orientation:
    direction = {}
    for eid, a, b, qe, x in cg.edges:
        direction[eid] = o.direction[qe]
    return Orientation(direction)


def _require_free(gg: GainGraph):
    g = gg.group
    for v in gg.vertices:
        if len(gg.stabilizer(v)) > 1:
            raise ActionNotFree(f"vertex {v!r} is fixed by {sorted(gg.stabilizer(v) - {g.identity}, key=g.sort_key)}")
    for e in gg.edges:
        if e.is_loop and g.mul(e.gain, e.gain) == g.identity:
            raise ActionNotFree(f"loop {e.id!r} has gain {e.gain} of order 2, so its edge orbit is not free")


def lift_decomposition(gg: GainGraph, dec: AssurDecomposition) -> LiftedDecomposition:
    """Lift the orientation to the covering graph and decompose there."""
    _require_free(gg)
    o = dec.orientation or s_directed_orientation(gg)
    cg = cover(gg)
    cgg = cg.as_gain_graph(trivial_rep(gg.d))
    co = lift_orientation(gg, cg, o)
    cdec = scc_decomposition(cgg, co)
    qof = dec.component_of
    parent = {c: qof[cg.vertices[c][0]] for c in cdec.components}
    return LiftedDecomposition(cg, cgg, co, cdec, parent)


def project_decomposition(cdec: AssurDecomposition, cg: CoveringGraph) -> AssurDecomposition:
    """Map covering components onto vertex orbits and merge."""
    orbit = {v: o for v, (o, _) in cg.vertices.items()}
    groups = {}
    for c, vs in cdec.components.items():
        groups.setdefault(orbit[vs[0]], set()).update(orbit[v] for v in vs)
    # merge overlapping orbit sets
    parts = []
    for s in groups.values():
        s = set(s)
        for p in [p for p in parts if p & s]:
            parts.remove(p)
            s |= p
        parts.append(s)
    comps = {}
    for p in parts:
        members = tuple(sorted(p, key=vkey))
        comps[members[0]] = members
    qof = {v: c for c, vs in comps.items() for v in vs}
    qof[GROUND] = GROUND
    blocks = set()
    for a, b in cdec.block_edges:
        qa = qof[orbit[cdec.components[a][0]]]
        qb = GROUND if b == GROUND else qof[orbit[cdec.components[b][0]]]
        if qa != qb:
            blocks.add((qa, qb))
    names = sorted(comps, key=vkey)
    return AssurDecomposition(dict(sorted(comps.items(), key=lambda kv: vkey(kv[0]))), blocks,
                              _linear_extension(names, blocks))


def plain_decomposition(gg: GainGraph) -> AssurDecomposition:
    """Assur decomposition of the covering graph with the symmetry forgotten."""
    cgg = cover(gg).as_gain_graph(trivial_rep(gg.d))
    return decompose(cgg)


@dataclass
class SubgroupDecomposition:
    gain_graph: GainGraph
    decomposition: AssurDecomposition
    projection: dict
    """R-component name -> S-component name"""


def subgroup_decomposition(gg: GainGraph, elements, dec: AssurDecomposition | None = None) -> SubgroupDecomposition:
    """Re-quotient the covering graph by a subgroup ``R`` and decompose under ``R``."""
    S = gg.group
    R = S.subgroup(elements, name=None)
    rep_R = gg.rep.restrict(R)
    cg = cover(gg)
    ggR = quotient(cg.kinds, [e[:3] for e in cg.edges], {g: cg.action[g] for g in R}, rep_R)
    decR = decompose(ggR)
    dec = dec or decompose(gg)
    sof = dec.component_of
    projection = {c: sof[cg.vertices[c][0]] for c in decR.components}
    return SubgroupDecomposition(ggR, decR, projection)


def isostatic_comparison(gg: GainGraph, trials: int = 5, seed: int = 0) -> dict:
    """Symmetric and plain isostaticity side by side (no implication is asserted)."""
    sym = is_pinned_S_isostatic(gg, trials, seed)
    cgg = cover(gg).as_gain_graph(trivial_rep(gg.d))
    plain = is_pinned_S_isostatic(cgg, trials, seed)
    return {"symmetric": bool(sym), "plain": bool(plain), "free": gg.is_free()}
