"""Out-degree constrained orientations of pinned gain graphs via the pebble game."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import NoOrientation
from .graphs import GainGraph, vkey

FORWARD, REVERSE = "forward", "reverse"


@dataclass(frozen=True)
class Orientation:
    """Direction of every edge relative to its stored reference (tail -> head).

    A loop is always one outgoing edge of its vertex.
    """

    direction: dict

    def source(self, gg: GainGraph, eid) -> str:
        e = gg.edge(eid)
        return e.tail if self.direction[eid] == FORWARD else e.head

    def target(self, gg: GainGraph, eid) -> str:
        e = gg.edge(eid)
        return e.head if self.direction[eid] == FORWARD else e.tail

    def arcs(self, gg: GainGraph) -> list:
        """``(eid, source, target)`` for every edge, in edge order."""
        return [(e.id, self.source(gg, e.id), self.target(gg, e.id)) for e in gg.edges]

    def out_degrees(self, gg: GainGraph) -> Counter:
        c = Counter({v: 0 for v in gg.vertices})
        for e in gg.edges:
            c[self.source(gg, e.id)] += 1
        return c


def _search(start, out, pebbles, rng):
    """DFS along out-edges from ``start`` for a vertex holding a free pebble.

    Returns ``(path of edge ids, vertex)`` or ``(None, visited set)``.
    """
    seen = {start}
    stack = [(start, iter(_ordered(out[start], rng)))]
    path = []
    if pebbles[start] > 0:
        return [], start
    while stack:
        v, it = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            if path:
                path.pop()
            continue
        eid, w = step
        if w in seen:
            continue
        seen.add(w)
        path.append(eid)
        if pebbles[w] > 0:
            return list(path), w
        stack.append((w, iter(_ordered(out[w], rng))))
    return None, seen


def _ordered(arcs, rng):
    arcs = sorted(arcs.items(), key=lambda kv: (vkey(kv[1]), kv[0][1]))
    out = [(eid, w) for (eid, _), w in arcs]
    if rng is not None:
        rng.shuffle(out)
    return out


def s_directed_orientation(gg: GainGraph, capacities: dict | None = None, rng=None) -> Orientation:
    """Orient ``gg`` so inner vertex ``v`` has out-degree ``m(v)`` and pins have none.

    Edges are inserted in input order (shuffled when ``rng`` is given); a free
    pebble is fetched for an endpoint by reversing a directed path found with
    depth-first search, visiting neighbours by ascending id.
    """
    cap = {v: (0 if gg.is_pin(v) else gg.m(v)) for v in gg.vertices}
    if capacities:
        cap.update({v: (0 if gg.is_pin(v) else int(c)) for v, c in capacities.items()})
    pebbles = dict(cap)
    # out[v] maps (eid, index) -> current target
    out = {v: {} for v in gg.vertices}
    index = {e.id: i for i, e in enumerate(gg.edges)}
    src = {}
    order = list(gg.edges)
    if rng is not None:
        order = [order[i] for i in rng.permutation(len(order))]
    for e in order:
        if e.is_loop:
            if pebbles[e.tail] == 0:
                path, found = _search(e.tail, out, pebbles, rng)
                if path is None:
                    raise NoOrientation(f"no pebble available for loop {e.id!r}", _inner(gg, found))
                _reverse(path, found, e.tail, out, src, gg, index, pebbles)
            pebbles[e.tail] -= 1
            src[e.id] = e.tail
            continue
        ends = (e.tail, e.head)
        if rng is not None and rng.random() < 0.5:
            ends = ends[::-1]
        placed = False
        blocking = set()
        for a in ends:
            path, found = _search(a, out, pebbles, rng)
            if path is None:
                blocking |= found
                continue
            _reverse(path, found, a, out, src, gg, index, pebbles)
            b = e.head if a == e.tail else e.tail
            pebbles[a] -= 1
            src[e.id] = a
            out[a][e.id, index[e.id]] = b
            placed = True
            break
        if not placed:
            raise NoOrientation(f"edge {e.id!r} cannot be oriented: the vertex set reachable from its "
                                f"ends has no free capacity", _inner(gg, blocking))
    left = {v: p for v, p in pebbles.items() if p > 0}
    if left:
        raise NoOrientation(f"too few edges: out-degree short at {sorted(left, key=vkey)}", sorted(left, key=vkey))
    direction = {e.id: (FORWARD if src[e.id] == e.tail else REVERSE) for e in gg.edges}
    return Orientation(direction)


def _inner(gg, vs):
    return sorted((v for v in vs if not gg.is_pin(v)), key=vkey)


def _reverse(path, end, start, out, src, gg, index, pebbles):
    """Reverse the directed path ``start -> ... -> end`` so the pebble moves to ``start``."""
    v = start
    for eid in path:
        key = (eid, index[eid])
        w = out[v].pop(key)
        out[w][key] = v
        src[eid] = w
        v = w
    if path:
        pebbles[start] += 1
        pebbles[end] -= 1


def verify_orientation(gg: GainGraph, o: Orientation) -> bool:
    if set(o.direction) != set(gg.edge_ids):
        return False
    if any(d not in (FORWARD, REVERSE) for d in o.direction.values()):
        return False
    deg = o.out_degrees(gg)
    return all(deg[v] == (0 if gg.is_pin(v) else gg.m(v)) for v in gg.vertices)


def equivalent(gg: GainGraph, o1: Orientation, o2: Orientation) -> bool:
    """Same out-degree at every vertex, so the two differ by reversing cycles."""
    return o1.out_degrees(gg) == o2.out_degrees(gg)


def random_orientation(gg: GainGraph, seed: int = 0, cycle_flips: int = 10) -> Orientation:
    """A randomized valid orientation: shuffled pebble game, then random cycle reversals."""
    rng = np.random.default_rng(seed)
    o = s_directed_orientation(gg, rng=rng)
    direction = dict(o.direction)
    arcs = {e.id: e for e in gg.edges if not e.is_loop}
    for _ in range(cycle_flips):
        cur = Orientation(direction)
        out = {v: [] for v in gg.vertices}
        for eid, e in arcs.items():
            out[cur.source(gg, eid)].append((eid, cur.target(gg, eid)))
        starts = [v for v in gg.inner if out[v]]
        if not starts:
            break
        v = starts[rng.integers(len(starts))]
        walk, pos = [], {v: 0}
        while True:
            if not out[v]:
                walk = None
                break
            eid, w = out[v][rng.integers(len(out[v]))]
            walk.append(eid)
            if w in pos:
                cycle = walk[pos[w]:]
                break
            pos[w] = len(walk)
            v = w
        if walk is None:
            continue
        for eid in cycle:
            direction[eid] = REVERSE if direction[eid] == FORWARD else FORWARD
    return Orientation(direction)
