"""Gain graphs, covering graphs and the combinatorial counting conditions."""
from __future__ import annotations

import itertools
import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import GraphError, InstanceTooLarge
from .group import Group, Representation, fixed_subspace, symmetric_trivial_motions

EDGE_BOUND = 22
INNER, PIN = "inner", "pin"


def vkey(v):
    """Natural sort key for vertex ids, so that ``v2`` sorts before ``v10``."""
    parts = re.split(r"(\d+)", str(v))
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts if p != "")


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str = INNER
    stabilizer: frozenset = frozenset({"id"})

    @property
    def is_pin(self) -> bool:
        return self.kind == PIN


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    gain: str = "id"

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    def other(self, v):
        return self.head if v == self.tail else self.tail


class GainGraph:
    """Quotient gain graph of a symmetric pinned graph.

    Edge ``u -> v`` with gain ``g`` stands for the orbit of the covering edge
    joining ``u`` and ``g v``. Reversing the reference direction inverts the gain.
    """

    def __init__(self, rep: Representation, vertices: Iterable[Vertex], edges: Iterable[Edge]):
        self.rep = rep
        self.group: Group = rep.group
        self.d = rep.dimension
        g = self.group
        self._vertices: dict = {}
        for v in vertices:
            if v.id in self._vertices:
                raise GraphError(f"duplicate vertex id {v.id!r}")
            if v.kind not in (INNER, PIN):
                raise GraphError(f"vertex {v.id!r}: kind must be 'inner' or 'pin', got {v.kind!r}")
            stab = frozenset(g.check(x) for x in v.stabilizer) | {g.identity}
            if not g.is_subgroup(stab):
                raise GraphError(f"vertex {v.id!r}: stabilizer is not a subgroup")
            self._vertices[v.id] = Vertex(v.id, v.kind, stab)
        self._edges: dict = {}
        for e in edges:
            if e.id in self._edges:
                raise GraphError(f"duplicate edge id {e.id!r}")
            for end in (e.tail, e.head):
                if end not in self._vertices:
                    raise GraphError(f"edge {e.id!r} references unknown vertex {end!r}")
            gain = g.check(e.gain)
            tv, hv = self._vertices[e.tail], self._vertices[e.head]
            if tv.is_pin and hv.is_pin:
                raise GraphError(f"edge {e.id!r} joins two pins")
            if e.is_loop:
                if gain in tv.stabilizer:
                    raise GraphError(f"loop {e.id!r} has gain {gain} in the stabilizer of {e.tail!r} (degenerate edge orbit)")
            self._edges[e.id] = Edge(e.id, e.tail, e.head, gain)
        self._bases = {vid: fixed_subspace(rep, v.stabilizer).basis for vid, v in self._vertices.items()}

    # -- accessors -------------------------------------------------------
    @property
    def vertices(self) -> list:
        return list(self._vertices)

    @property
    def inner(self) -> list:
        return [v for v, x in self._vertices.items() if not x.is_pin]

    @property
    def pins(self) -> list:
        return [v for v, x in self._vertices.items() if x.is_pin]

    @property
    def edges(self) -> list:
        return list(self._edges.values())

    @property
    def edge_ids(self) -> list:
        return list(self._edges)

    def vertex(self, v) -> Vertex:
        return self._vertices[v]

    def edge(self, eid) -> Edge:
        try:
            return self._edges[eid]
        except KeyError:
            raise GraphError(f"unknown edge id {eid!r}") from None

    def is_pin(self, v) -> bool:
        return self._vertices[v].is_pin

    def stabilizer(self, v) -> frozenset:
        return self._vertices[v].stabilizer

    def basis(self, v) -> np.ndarray:
        return self._bases[v]

    def m(self, v) -> int:
        """Column dimension of an inner vertex orbit (0 for pins)."""
        return 0 if self.is_pin(v) else self._bases[v].shape[1]

    def column_count(self) -> int:
        return sum(self.m(v) for v in self.inner)

    def incident(self, v) -> list:
        return [e for e in self._edges.values() if v in (e.tail, e.head)]

    def neighbors(self, v) -> set:
        return {e.other(v) for e in self.incident(v)} - {v}

    def is_free(self) -> bool:
        """True when the action is free on vertices and on edges."""
        g = self.group
        if any(len(x.stabilizer) > 1 for x in self._vertices.values()):
            return False
        return not any(e.is_loop and g.mul(e.gain, e.gain) == g.identity for e in self.edges)

    # -- rewriting -------------------------------------------------------
    def replace(self, vertices=None, edges=None) -> "GainGraph":
        return GainGraph(self.rep,
                         self._vertices.values() if vertices is None else vertices,
                         self._edges.values() if edges is None else edges)

    def without_edges(self, ids: Iterable) -> "GainGraph":
        drop = set(ids)
        for i in drop:
            self.edge(i)
        return self.replace(edges=[e for e in self.edges if e.id not in drop])

    def with_edges(self, extra: Iterable[Edge]) -> "GainGraph":
        return self.replace(edges=self.edges + list(extra))

    def with_vertex(self, v: Vertex) -> "GainGraph":
        return self.replace(vertices=list(self._vertices.values()) + [v])

    def induced(self, vs: Iterable) -> "GainGraph":
        keep = set(vs)
        return self.replace(vertices=[x for k, x in self._vertices.items() if k in keep],
                            edges=[e for e in self.edges if e.tail in keep and e.head in keep])

    def reversed_edge(self, e: Edge) -> Edge:
        return Edge(e.id, e.head, e.tail, self.group.inv(e.gain))

    def canonical_edges(self) -> list:
        """Edges re-referenced so that tail <= head; loops take the smaller of g, g^-1."""
        g = self.group
        out = []
        for e in self.edges:
            if e.is_loop:
                gain = min(e.gain, g.inv(e.gain), key=g.sort_key)
                out.append(Edge(e.id, e.tail, e.head, gain))
            elif vkey(e.tail) > vkey(e.head):
                out.append(self.reversed_edge(e))
            else:
                out.append(e)
        return out

    def switch(self, potentials: Mapping) -> "GainGraph":
        """Gain switching: ``psi(u->v) -> phi(u)^-1 psi phi(v)``."""
        g = self.group
        phi = {v: potentials.get(v, g.identity) for v in self.vertices}
        return self.replace(edges=[Edge(e.id, e.tail, e.head, g.prod(g.inv(phi[e.tail]), e.gain, phi[e.head]))
                                   for e in self.edges])

    def __repr__(self):
        return (f"GainGraph({self.group.name}, d={self.d}, inner={len(self.inner)}, "
                f"pins={len(self.pins)}, edges={len(self._edges)})")


# ---------------------------------------------------------------------------
# Covering graphs
# ---------------------------------------------------------------------------

def cover_vertex_name(v, x) -> str:
    return f"{v}@{x}"


@dataclass
class CoveringGraph:
    """The symmetric graph reconstructed from a gain graph.

    ``vertices`` maps a covering-vertex id to ``(orbit, coset representative)``;
    ``edges`` holds ``(id, a, b, quotient edge id, x)`` with ``a = x u`` and
    ``b = x psi v`` for the quotient edge ``u -> v``.
    """

    group: Group
    vertices: dict
    kinds: dict
    edges: list
    action: dict = field(repr=False)

    @property
    def inner(self):
        return [v for v in self.vertices if self.kinds[v] == INNER]

    @property
    def pins(self):
        return [v for v in self.vertices if self.kinds[v] == PIN]

    def vertex_fiber(self, orbit) -> list:
        return [v for v, (o, _) in self.vertices.items() if o == orbit]

    def edge_fiber(self, qe) -> list:
        return [e for e in self.edges if e[3] == qe]

    def as_gain_graph(self, rep: Representation) -> GainGraph:
        """View the covering graph as a gain graph over ``rep`` with identity gains.

        ``rep`` is normally the trivial representation of the same dimension.
        """
        vs = [Vertex(v, self.kinds[v]) for v in self.vertices]
        es = [Edge(eid, a, b, rep.group.identity) for eid, a, b, _, _ in self.edges]
        return GainGraph(rep, vs, es)


def _coset_rep(grp: Group, x, stab) -> str:
    return min((grp.mul(x, h) for h in stab), key=grp.sort_key)


def cover(gg: GainGraph, grp: Group | None = None) -> CoveringGraph:
    """Unroll a gain graph into its covering graph."""
    grp = grp or gg.group
    vertices, kinds = {}, {}
    where = {}
    for v in gg.vertices:
        stab = gg.stabilizer(v)
        for x in grp:
            c = _coset_rep(grp, x, stab)
            name = cover_vertex_name(v, c)
            where[v, x] = name
            if name not in vertices:
                vertices[name] = (v, c)
                kinds[name] = PIN if gg.is_pin(v) else INNER
    edges = []
    for e in gg.edges:
        seen = set()
        for x in grp:
            a, b = where[e.tail, x], where[e.head, grp.mul(x, e.gain)]
            if a == b:
                raise GraphError(f"loop {e.id!r} collapses to a point in the cover")
            key = frozenset((a, b))
            if key in seen:
                continue
            seen.add(key)
            edges.append((f"{e.id}@{x}", a, b, e.id, x))
    action = {g: {name: where[o, grp.mul(g, c)] for name, (o, c) in vertices.items()} for g in grp}
    return CoveringGraph(grp, vertices, kinds, edges, action)


def quotient(cg_vertices: Mapping, cg_edges: Iterable, action: Mapping, rep: Representation) -> GainGraph:
    """Quotient a symmetric graph by a group action.

    ``cg_vertices`` maps vertex id -> kind, ``cg_edges`` is a list of
    ``(edge id, a, b)``, and ``action[g]`` maps each vertex to ``g . vertex``.
    The representative of each vertex orbit is its smallest id.
    """
    grp = rep.group
    verts = sorted(cg_vertices, key=vkey)
    edges = [tuple(e[:3]) for e in cg_edges]
    for g in grp:
        if g not in action:
            raise GraphError(f"action missing group element {g!r}")
        if sorted(action[g], key=vkey) != verts or sorted(action[g].values(), key=vkey) != verts:
            raise GraphError(f"action of {g!r} is not a permutation of the vertices")
    for v in verts:
        if action[grp.identity][v] != v:
            raise GraphError("identity does not act trivially")
        for g in grp:
            if cg_vertices[action[g][v]] != cg_vertices[v]:
                raise GraphError(f"action of {g!r} maps {v!r} across the inner/pin partition")
            for h in grp:
                if action[g][action[h][v]] != action[grp.mul(g, h)][v]:
                    raise GraphError(f"action is not a homomorphism at ({g}, {h}) on {v!r}")
    pairs = defaultdict(list)
    for eid, a, b in edges:
        if a == b:
            raise GraphError(f"edge {eid!r} is a loop in the covering graph")
        pairs[frozenset((a, b))].append(eid)
    for g in grp:
        for key, ids in pairs.items():
            a, b = tuple(key)
            img = frozenset((action[g][a], action[g][b]))
            if len(pairs.get(img, ())) != len(ids):
                raise GraphError(f"action of {g!r} does not preserve edge {ids[0]!r}")

    # vertex orbits and transversals t(w) with w = t(w) . rep
    rep_of, trans = {}, {}
    for v in verts:
        if v in rep_of:
            continue
        for g in grp:
            w = action[g][v]
            if w not in rep_of:
                rep_of[w], trans[w] = v, g
    stabs = {v: frozenset(g for g in grp if action[g][v] == v) for v in set(rep_of.values())}

    # edge orbits; the i-th copy of a pair goes to the i-th copy of its image
    done = set()
    qedges = []
    for eid, a, b in sorted(edges, key=lambda e: (vkey(e[0]),)):
        if eid in done:
            continue
        key = frozenset((a, b))
        idx = pairs[key].index(eid)
        orbit = []
        for g in grp:
            img = frozenset((action[g][a], action[g][b]))
            orbit.append((pairs[img][idx], img))
        done.update(o[0] for o in orbit)
        cands = []
        for oid, img in orbit:
            x, y = tuple(img)
            for s, t in ((x, y), (y, x)):
                if rep_of[s] == s:
                    cands.append((vkey(s), vkey(rep_of[t]), grp.sort_key(trans[t]), s, rep_of[t], trans[t]))
        cands.sort()
        _, _, _, tail, head, gain = cands[0]
        qedges.append(Edge(eid, tail, head, gain))
    qverts = [Vertex(v, cg_vertices[v], stabs[v]) for v in verts if rep_of[v] == v]
    return GainGraph(rep, qverts, qedges)


def quotient_of_cover(cg: CoveringGraph, rep: Representation) -> GainGraph:
    return quotient(cg.kinds, [e[:3] for e in cg.edges], cg.action, rep)


# ---------------------------------------------------------------------------
# Balance
# ---------------------------------------------------------------------------

def potentials(gg: GainGraph, F: Iterable) -> dict | None:
    """Vertex potentials ``phi`` with ``phi(head) = phi(tail) psi`` on every edge
    of ``F``, or ``None`` when ``F`` is unbalanced."""
    g = gg.group
    es = [gg.edge(i) if not isinstance(i, Edge) else i for i in F]
    adj = defaultdict(list)
    for e in es:
        if e.is_loop:
            if e.gain != g.identity:
                return None
            continue
        adj[e.tail].append((e.head, e.gain))
        adj[e.head].append((e.tail, g.inv(e.gain)))
    phi = {}
    for root in sorted(adj, key=vkey):
        if root in phi:
            continue
        phi[root] = g.identity
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w, psi in adj[u]:
                want = g.mul(phi[u], psi)
                if w not in phi:
                    phi[w] = want
                    queue.append(w)
                elif phi[w] != want:
                    return None
    return phi


def is_balanced(gg: GainGraph, F: Iterable) -> bool:
    """True iff every cycle of ``F`` has gain product equal to the identity."""
    return potentials(gg, F) is not None


# ---------------------------------------------------------------------------
# Sparsity
# ---------------------------------------------------------------------------

@dataclass
class SparsityVerdict:
    satisfied: bool
    witness: tuple = ()
    n_edges: int = 0
    n_vertices: int = 0
    balanced: bool | None = None
    bound: int | None = None
    tight: bool = False
    mode: str = "exact"
    reason: str = ""

    def __bool__(self):
        return self.satisfied


def connected_vertex_subsets(vertices: list, adj: Mapping) -> list:
    """All nonempty connected vertex subsets, ordered by size then lexicographically."""
    order = {v: i for i, v in enumerate(vertices)}
    out = set()
    frontier = {frozenset([v]) for v in vertices}
    while frontier:
        out |= frontier
        nxt = set()
        for s in frontier:
            for v in s:
                for w in adj.get(v, ()):
                    if w in order and w not in s:
                        t = s | {w}
                        if t not in out:
                            nxt.add(t)
        frontier = nxt
    return sorted(out, key=lambda s: (len(s), sorted(order[v] for v in s)))


def _adjacency(edges):
    adj = defaultdict(set)
    for e in edges:
        adj[e.tail].add(e.head)
        adj[e.head].add(e.tail)
    return adj


def max_balanced_subset(gg: GainGraph, vs: list, edges: list) -> tuple:
    """Largest balanced edge subset of ``edges`` (spanning ``vs``) by brute force
    over vertex potentials; returns ``(edge list, potentials)``."""
    g = gg.group
    cand = [e for e in edges if not e.is_loop]
    if not cand:
        return [], {v: g.identity for v in vs}
    vs = list(vs)
    best, best_phi = [], None
    for combo in itertools.product(g.elements, repeat=len(vs) - 1):
        phi = dict(zip(vs, (g.identity,) + combo))
        hit = [e for e in cand if g.mul(phi[e.tail], e.gain) == phi[e.head]]
        if len(hit) > len(best) or best_phi is None:
            best, best_phi = hit, phi
    return best, best_phi


def _guard(n_edges, edge_bound):
    if n_edges > edge_bound:
        raise InstanceTooLarge(f"{n_edges} edges exceeds the exhaustive bound of {edge_bound}")


def gain_sparse(gg: GainGraph, k: int, l: int, m: int, edge_bound: int = EDGE_BOUND) -> SparsityVerdict:
    """Literal ``(k, l, m)``-gain-sparsity of the pin-free part of ``gg``.

    Balanced edge sets ``F`` must satisfy ``|F| <= k|V(F)| - l`` and all edge
    sets ``|F| <= k|V(F)| - m``.
    """
    if m > l:
        raise ValueError("gain sparsity needs m <= l")
    inner = sorted(gg.inner, key=vkey)
    es = [e for e in gg.edges if not gg.is_pin(e.tail) and not gg.is_pin(e.head)]
    _guard(len(es), edge_bound)
    adj = _adjacency(es)
    for vs in connected_vertex_subsets(inner, adj):
        sub = [e for e in es if e.tail in vs and e.head in vs]
        if not sub:
            continue
        ordered = sorted(vs, key=vkey)
        if len(sub) > k * len(vs) - m:
            return SparsityVerdict(False, tuple(e.id for e in sub), len(sub), len(vs),
                                   is_balanced(gg, sub), k * len(vs) - m)
        bal, _ = max_balanced_subset(gg, ordered, sub)
        if bal and len(bal) > k * len(vs) - l:
            return SparsityVerdict(False, tuple(e.id for e in bal), len(bal), len(vs), True, k * len(vs) - l)
    total = k * len(inner) - m
    return SparsityVerdict(True, n_edges=len(es), n_vertices=len(inner), bound=total,
                           tight=len(es) == total)


def _generic_points(gg: GainGraph, rng) -> dict:
    return {v: gg.basis(v) @ rng.uniform(-10, 10, gg.basis(v).shape[1]) for v in gg.vertices}


def _trivial_rank(gg, inner_vs, pin_vs, pts, motions, local_frames) -> int:
    """Rank of the trivial motions (t, A), vanishing at ``pin_vs``, restricted to ``inner_vs``."""
    if not motions:
        return 0
    cols = []
    for t, A in motions:
        pin_part = [t + A @ pts[p] for p in pin_vs]
        inner_part = [local_frames[v].T @ (t + A @ pts[v]) for v in inner_vs]
        cols.append(np.concatenate(pin_part + inner_part) if pin_part + inner_part else np.zeros(0))
    M = np.array(cols).T
    if M.size == 0:
        return 0
    npin = gg.d * len(pin_vs)
    if npin:
        # motions that fix every pin: restrict to the kernel of the pin block
        P = M[:npin]
        _, s, vt = np.linalg.svd(P)
        r = int(np.sum(s > 1e-9 * max(1.0, s[0] if len(s) else 0)))
        K = vt[r:].T
        if K.shape[1] == 0:
            return 0
        M = M[npin:] @ K
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > 1e-9 * max(1.0, s[0])))


def _full_motions(d):
    out = [(np.eye(d)[i], np.zeros((d, d))) for i in range(d)]
    for i, j in itertools.combinations(range(d), 2):
        A = np.zeros((d, d))
        A[i, j], A[j, i] = -1.0, 1.0
        out.append((np.zeros(d), A))
    return out


def pinned_isostatic_counts(gg: GainGraph, d: int | None = None, triv_S: int | None = None,
                            edge_bound: int = EDGE_BOUND, seed: int = 0) -> SparsityVerdict:
    """Counting test for pinned symmetric isostaticity.

    Requires ``|E| = sum m(v)``. Every connected subgraph must satisfy
    ``|E'| <= sum m(v') - t`` where ``t`` is the rank of the trivial motions
    that survive on it: the fully symmetric ones for an arbitrary edge set, all
    Euclidean ones for a balanced set, in both cases restricted to motions that
    keep the subgraph's pins in place. For large pin-free subgraphs this is the
    familiar ``(d, C(d+1,2), triv_S)``-gain-sparsity; small subgraphs and
    subgraphs with pins on a symmetry element get the sharper bound
    automatically. With free actions the test is exact in the plane for Cs and
    Cn; otherwise it is a necessary condition (``mode="necessary"``).
    """
    if d is not None and d != gg.d:
        raise ValueError(f"dimension mismatch: graph is {gg.d}-dimensional")
    mode = "exact" if (gg.is_free() and gg.d == 2 and getattr(gg.group, "schoenflies", "Cn") in ("Cs", "Cn")) else "necessary"
    cols = gg.column_count()
    if len(gg.edges) != cols:
        return SparsityVerdict(False, tuple(gg.edge_ids), len(gg.edges), len(gg.inner), None, cols,
                               mode=mode, reason=f"|E| = {len(gg.edges)} but the orbit matrix has {cols} columns")
    _guard(len(gg.edges), edge_bound)
    rng = np.random.default_rng(seed)
    pts = _generic_points(gg, rng)
    sym = symmetric_trivial_motions(gg.rep)
    full = _full_motions(gg.d)
    frames = {v: gg.basis(v) for v in gg.vertices}
    eye = {v: np.eye(gg.d) for v in gg.vertices}
    adj = _adjacency(gg.edges)
    for vs in connected_vertex_subsets(sorted(gg.vertices, key=vkey), adj):
        inner = sorted((v for v in vs if not gg.is_pin(v)), key=vkey)
        if not inner:
            continue
        pins = sorted((v for v in vs if gg.is_pin(v)), key=vkey)
        sub = [e for e in gg.edges if e.tail in vs and e.head in vs]
        if not sub:
            continue
        msum = sum(gg.m(v) for v in inner)
        t = _trivial_rank(gg, inner, pins, pts, sym, frames)
        if triv_S is not None and not pins:
            t = min(t, triv_S)
        if len(sub) > msum - t:
            return SparsityVerdict(False, tuple(e.id for e in sub), len(sub), len(vs), is_balanced(gg, sub),
                                   msum - t, mode=mode, reason="overbraced subgraph")
        if any(len(gg.stabilizer(v)) > 1 for v in inner):
            continue
        ordered = sorted(vs, key=vkey)
        bal, phi = max_balanced_subset(gg, ordered, sub)
        if not bal:
            continue
        lifted = {v: gg.rep(phi[v]) @ pts[v] for v in vs}
        tb = _trivial_rank(gg, inner, pins, lifted, full, eye)
        if len(bal) > msum - tb:
            return SparsityVerdict(False, tuple(e.id for e in bal), len(bal), len(vs), True, msum - tb,
                                   mode=mode, reason="overbraced balanced subgraph")
    return SparsityVerdict(True, (), len(gg.edges), len(gg.inner), None, cols, tight=True, mode=mode)
