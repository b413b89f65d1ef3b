"""Inductive constructions on gain graphs and their effect on the decomposition."""
from __future__ import annotations

from dataclasses import dataclass, field

from .decompose import GROUND, AssurDecomposition, decompose
from .errors import GainViolation, GraphError
from .graphs import Edge, GainGraph, Vertex, INNER

ZERO, ONE, LOOP_ONE = "zero", "one", "loop_one"
PRESERVED = "preserved"
NEW_SINGLETON = "new_singleton"
MERGED = "merged"
MADE_COMPARABLE = "incomparable_made_comparable"


@dataclass
class ExtensionSpec:
    """Parameters of an extension adding the vertex ``vertex``.

    * ``zero``: new edges ``vertex -> targets[i]`` with ``gains[i]``.
    * ``one``: delete ``edge`` (``x -> y`` with gain ``g``); add ``x -> v``
      with ``gamma1`` and ``v -> y`` with ``gamma2`` where ``gamma1 gamma2 = g``,
      then ``v -> targets[i]`` with ``gains[i]`` (the third edge, plus more
      in higher dimension).
    * ``loop_one``: a loop at ``vertex`` with ``loop_gain`` and edges
      ``vertex -> targets[i]`` with ``gains[i]``.

    New edges are stored with the new vertex as tail.
    """

    kind: str
    vertex: str
    targets: tuple = ()
    gains: tuple = ()
    edge: str | None = None
    gamma1: str = "id"
    gamma2: str = "id"
    loop_gain: str | None = None
    stabilizer: tuple = ("id",)
    edge_ids: tuple = ()

    @classmethod
    def from_json(cls, obj: dict) -> "ExtensionSpec":
        known = set(cls.__dataclass_fields__)
        extra = set(obj) - known
        if extra:
            raise GraphError(f"unknown extension fields {sorted(extra)}")
        obj = dict(obj)
        for k in ("targets", "gains", "stabilizer", "edge_ids"):
            if k in obj:
                obj[k] = tuple(obj[k])
        return cls(**obj)


def _new_edges(gg: GainGraph, spec: ExtensionSpec) -> tuple:
    """Validate ``spec`` against ``gg``; return (new edge list, deleted edge id or None)."""
    g = gg.group
    v = spec.vertex
    if v in gg.vertices:
        raise GainViolation(f"new vertex id {v!r} already exists")
    if spec.kind not in (ZERO, ONE, LOOP_ONE):
        raise GainViolation(f"unknown extension kind {spec.kind!r}")
    if len(spec.targets) != len(spec.gains):
        raise GainViolation("targets and gains must have the same length")
    for t in spec.targets:
        if t not in gg.vertices:
            raise GainViolation(f"target {t!r} is not a vertex")
    probe = gg.with_vertex(Vertex(v, INNER, frozenset(spec.stabilizer)))
    m = probe.m(v)
    arcs = []  # (target, gain) with v as tail
    deleted = None
    if spec.kind == ZERO:
        if len(spec.targets) != m:
            raise GainViolation(f"a 0-extension adds {m} edges here, got {len(spec.targets)}")
        arcs = [(t, g.check(x)) for t, x in zip(spec.targets, spec.gains)]
    elif spec.kind == LOOP_ONE:
        if spec.loop_gain is None or g.check(spec.loop_gain) == g.identity:
            raise GainViolation("loop-1-extension needs a loop gain different from id")
        if len(spec.targets) != m - 1:
            raise GainViolation(f"a loop-1-extension adds a loop and {m - 1} edges here, got {len(spec.targets)}")
        arcs = [(t, g.check(x)) for t, x in zip(spec.targets, spec.gains)]
    else:
        if spec.edge is None:
            raise GainViolation("1-extension needs the edge to delete")
        e = gg.edge(spec.edge)
        deleted = e.id
        g1, g2 = g.check(spec.gamma1), g.check(spec.gamma2)
        if g.mul(g1, g2) != e.gain:
            raise GainViolation(f"gamma1*gamma2 = {g.mul(g1, g2)} but the deleted edge {e.id!r} has gain {e.gain}")
        if len(spec.targets) != m - 1:
            raise GainViolation(f"a 1-extension adds {m + 1} edges here, so {m - 1} extra targets are needed, "
                                f"got {len(spec.targets)}")
        arcs = [(e.tail, g.inv(g1)), (e.head, g2)] + [(t, g.check(x)) for t, x in zip(spec.targets, spec.gains)]
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            if arcs[i][0] == arcs[j][0] and arcs[i][1] == arcs[j][1]:
                raise GainViolation(f"new parallel edges to {arcs[i][0]!r} share gain {arcs[i][1]}, "
                                    f"giving a balanced 2-cycle")
    ids = list(spec.edge_ids)
    n_new = len(arcs) + (1 if spec.kind == LOOP_ONE else 0)
    taken = set(gg.edge_ids)
    k = 1
    while len(ids) < n_new:
        cand = f"{v}_{k}"
        k += 1
        if cand not in taken and cand not in ids:
            ids.append(cand)
    if len(ids) != n_new or len(set(ids)) != n_new or taken & set(ids) - ({deleted} if deleted else set()):
        raise GainViolation("edge ids for the new edges must be fresh and unique")
    edges = [Edge(i, v, t, x) for i, (t, x) in zip(ids, arcs)]
    if spec.kind == LOOP_ONE:
        loop = g.check(spec.loop_gain)
        if loop in probe.stabilizer(v):
            raise GainViolation(f"loop gain {loop} fixes the new vertex")
        edges.append(Edge(ids[-1], v, v, loop))
    return edges, deleted


def apply_extension(gg: GainGraph, spec: ExtensionSpec) -> GainGraph:
    edges, deleted = _new_edges(gg, spec)
    vertices = [gg.vertex(u) for u in gg.vertices] + [Vertex(spec.vertex, INNER, frozenset(spec.stabilizer))]
    kept = [e for e in gg.edges if e.id != deleted]
    return GainGraph(gg.rep, vertices, kept + edges)


# ---------------------------------------------------------------------------
# Classification of 1-extensions
# ---------------------------------------------------------------------------

def _comp(gg, dec, v):
    return GROUND if gg.is_pin(v) else dec.component_of[v]


def _is_below(dec, a, b) -> bool:
    """``a`` strictly below ``b`` (the ground is below every component)."""
    if a == b:
        return False
    if a == GROUND:
        return True
    if b == GROUND:
        return False
    return a in dec.below(b)


def predict_one_extension(gg: GainGraph, dec: AssurDecomposition, spec: ExtensionSpec) -> str:
    """Label from the case analysis of a 1-extension deleting ``xy`` and adding ``vw``.

    Case a (``xy`` inside one component ``K``): ``w`` in ``K`` or below keeps
    everything; ``w`` above merges; ``w`` incomparable makes ``K`` comparable
    to it. Case b (``x`` in ``K`` above ``y``'s component ``J``): ``w`` in ``K``
    keeps everything; ``w`` above ``K`` merges; otherwise ``v`` becomes its own
    component.
    """
    if spec.kind != ONE:
        raise GainViolation("only 1-extensions are classified")
    e = gg.edge(spec.edge)
    w = spec.targets[0]
    cx, cy, cw = _comp(gg, dec, e.tail), _comp(gg, dec, e.head), _comp(gg, dec, w)
    if cx == cy:
        k = cx
        if cw == k or _is_below(dec, cw, k):
            return PRESERVED
        if _is_below(dec, k, cw):
            return MERGED
        return MADE_COMPARABLE
    k, j = (cx, cy) if _is_below(dec, cy, cx) else (cy, cx)
    if cw == k:
        return PRESERVED
    if _is_below(dec, k, cw):
        return MERGED
    return NEW_SINGLETON


def observed_change(old: AssurDecomposition, new: AssurDecomposition, v) -> str:
    """Compare a decomposition with the one after adding vertex ``v``."""
    old_of = old.component_of
    for members in new.components.values():
        if len({old_of[u] for u in members if u != v}) > 1:
            return MERGED
    if (v,) in new.components.values():
        return NEW_SINGLETON
    strip = lambda s: frozenset(u for u in s if u != v)
    new_pairs = {(strip(a), strip(b)) for a, b in new.order_pairs()}
    new_pairs = {p for p in new_pairs if p[0] and p[1]}
    return PRESERVED if new_pairs == old.order_pairs() else MADE_COMPARABLE


@dataclass
class ExtensionClassification:
    label: str
    recomputed: str
    agrees: bool
    heuristic: bool
    graph: GainGraph = field(repr=False)
    decomposition: AssurDecomposition = field(repr=False)


def classify_one_extension(gg: GainGraph, dec: AssurDecomposition, spec: ExtensionSpec) -> ExtensionClassification:
    """Predict the effect of a 1-extension and check it against a fresh decomposition.

    Results for non-free actions or outside the plane are marked heuristic.
    """
    label = predict_one_extension(gg, dec, spec)
    new = apply_extension(gg, spec)
    ndec = decompose(new)
    seen = observed_change(dec, ndec, spec.vertex)
    heuristic = not gg.is_free() or gg.d != 2
    return ExtensionClassification(label, seen, label == seen, heuristic, new, ndec)
