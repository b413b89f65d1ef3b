"""Random pinned symmetric frameworks, grown by extensions from a single pin orbit."""
import numpy as np

from symassur.errors import GainViolation
from symassur.extend import ExtensionSpec, apply_extension
from symassur.graphs import GainGraph, Vertex
from symassur.group import make_schoenflies


def plane_group(rng):
    """A random plane group from Cs, C2..C6."""
    if rng.random() < 0.3:
        return make_schoenflies("Cs", 1, 2)[1]
    return make_schoenflies("Cn", int(rng.integers(2, 7)), 2)[1]


def _free_loop_gains(grp):
    return [x for x in grp if grp.mul(x, x) != grp.identity]


def random_isostatic(rng, rep=None, n_inner=None, free=True, pins=None):
    """Grow a pinned isostatic gain graph by 0-, loop-1- and 1-extensions."""
    rep = rep or plane_group(rng)
    grp = rep.group
    n_inner = n_inner or int(rng.integers(1, 6))
    pins = pins or int(rng.integers(1, 3))
    gg = GainGraph(rep, [Vertex(f"P{i}", "pin") for i in range(pins)], [])
    loops = _free_loop_gains(grp) if free else [x for x in grp if x != grp.identity]
    k = 0
    while len(gg.inner) < n_inner:
        v = f"v{k}"
        k += 1
        kind = rng.choice(["zero", "zero", "loop_one", "one"])
        verts = gg.vertices
        try:
            if kind == "loop_one" and loops:
                spec = ExtensionSpec("loop_one", v, targets=(str(rng.choice(verts)),),
                                     gains=(str(rng.choice(grp.elements)),),
                                     loop_gain=str(rng.choice(loops)))
            elif kind == "one" and gg.edges:
                e = gg.edges[int(rng.integers(len(gg.edges)))]
                g1 = str(rng.choice(grp.elements))
                g2 = grp.mul(grp.inv(g1), e.gain)
                spec = ExtensionSpec("one", v, targets=(str(rng.choice(verts)),),
                                     gains=(str(rng.choice(grp.elements)),), edge=e.id, gamma1=g1, gamma2=g2)
            else:
                spec = ExtensionSpec("zero", v, targets=tuple(str(rng.choice(verts)) for _ in range(2)),
                                     gains=tuple(str(rng.choice(grp.elements)) for _ in range(2)))
            gg = apply_extension(gg, spec)
        except GainViolation:
            k -= 1
            continue
    # drop pins nobody uses
    used = {x for e in gg.edges for x in (e.tail, e.head)}
    return gg.replace(vertices=[gg.vertex(v) for v in gg.vertices if not gg.is_pin(v) or v in used])


def random_one_extension(rng, gg, name="new"):
    """A random valid 1-extension spec for ``gg`` (retries until the gains are legal)."""
    grp = gg.group
    for _ in range(100):
        e = gg.edges[int(rng.integers(len(gg.edges)))]
        w = str(rng.choice(gg.vertices))
        g1 = str(rng.choice(grp.elements))
        g2 = grp.mul(grp.inv(g1), e.gain)
        spec = ExtensionSpec("one", name, targets=(w,), gains=(str(rng.choice(grp.elements)),),
                             edge=e.id, gamma1=g1, gamma2=g2)
        try:
            apply_extension(gg, spec)
        except GainViolation:
            continue
        return spec
    raise RuntimeError("no valid 1-extension found")


def random_assur(rng, min_inner=2, attempts=200):
    """A pinned Assur gain graph: one multi-vertex component of a random isostatic graph, lower parts pinned."""
    from symassur.decompose import decompose, extended_component

    for _ in range(attempts):
        gg = random_isostatic(rng, n_inner=int(rng.integers(3, 7)))
        dec = decompose(gg)
        big = [c for c, vs in dec.components.items() if len(vs) >= min_inner]
        if big:
            return extended_component(gg, dec, big[int(rng.integers(len(big)))])
    raise RuntimeError("no Assur component of the requested size found")
