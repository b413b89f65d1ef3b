"""Independent reference computations used only by the tests."""
import itertools

import networkx as nx
import numpy as np

from symassur.graphs import vkey


def matrix_group_table(rep, atol=1e-9):
    """Multiplication table recovered purely from the matrices (faithful reps only)."""
    els = list(rep.group)
    table = {}
    for a, b in itertools.product(els, repeat=2):
        prod = rep(a) @ rep(b)
        hits = [c for c in els if np.allclose(rep(c), prod, atol=atol)]
        assert len(hits) == 1
        table[a, b] = hits[0]
    return table


def networkx_sccs(gg, orientation):
    """SCC partition of inner vertices with networkx, pins merged into one node."""
    G = nx.MultiDiGraph()
    node = {v: ("__ground__" if gg.is_pin(v) else v) for v in gg.vertices}
    G.add_nodes_from(set(node.values()))
    for eid, s, t in orientation.arcs(gg):
        G.add_edge(node[s], node[t])
    return {frozenset(c) for c in nx.strongly_connected_components(G) if "__ground__" not in c}


def closed_set_decomposition(M, gg, atol=1e-12):
    """Finest block-triangular structure of a square full-rank orbit matrix by
    brute force over vertex subsets.

    A vertex set ``S`` is closed when the rows supported inside its columns are
    exactly as many as its columns. Closed sets are closed under intersection;
    the smallest closed set around each vertex gives the blocks and their order.
    Returns ``(partition, order)`` with ``order`` a set of (upper, lower) pairs.
    """
    inner = list(gg.inner)
    A = np.abs(M.matrix) > atol
    cols = {v: set(range(M.block(v).start, M.block(v).stop)) for v in inner}
    support = [set(np.nonzero(A[i])[0]) for i in range(A.shape[0])]
    closed = []
    for r in range(1, len(inner) + 1):
        for S in itertools.combinations(inner, r):
            C = set().union(*(cols[v] for v in S))
            n_rows = sum(1 for s in support if s <= C)
            if n_rows == len(C):
                closed.append(frozenset(S))
    cl = {}
    for v in inner:
        hull = frozenset(inner)
        for S in closed:
            if v in S:
                hull &= S
        cl[v] = hull
    blocks = {}
    for v in inner:
        blocks.setdefault(cl[v], set()).add(v)
    partition = {frozenset(b) for b in blocks.values()}
    order = set()
    for h1, b1 in blocks.items():
        for h2, b2 in blocks.items():
            if h2 < h1:
                order.add((frozenset(b1), frozenset(b2)))
    return partition, order


def gain_equivalent(g1, g2, rename=lambda v: v):
    """Brute-force check that two gain graphs agree up to switching.

    Vertices of ``g2`` are mapped onto ``g1`` with ``rename``; edges are
    compared as multisets of (tail, head, gain) in canonical direction.
    """
    grp = g1.group
    if sorted(map(rename, g2.vertices), key=vkey) != sorted(g1.vertices, key=vkey):
        return False

    def canon(edges):
        out = []
        for t, h, g in edges:
            if t == h:
                out.append((t, h, min(g, grp.inv(g), key=grp.sort_key)))
            elif vkey(t) > vkey(h):
                out.append((h, t, grp.inv(g)))
            else:
                out.append((t, h, g))
        return sorted(out, key=lambda x: (vkey(x[0]), vkey(x[1]), grp.sort_key(x[2])))

    target = canon([(e.tail, e.head, e.gain) for e in g1.edges])
    base = [(rename(e.tail), rename(e.head), e.gain) for e in g2.edges]
    verts = sorted(g1.vertices, key=vkey)
    for phi in itertools.product(grp.elements, repeat=len(verts)):
        p = dict(zip(verts, phi))
        switched = [(t, h, grp.prod(grp.inv(p[t]), g, p[h])) for t, h, g in base]
        if canon(switched) == target:
            return True
    return False
