"""Symmetric drivers: which parts move when one edge orbit becomes an actuator."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .decompose import AssurDecomposition, decompose
from .errors import NotAssur, NotIsostatic, SingularMatrix
from .graphs import GainGraph, cover, vkey
from .orbit import (RANK_TOL, Configuration, build_orbit_matrix, is_pinned_S_isostatic, lift_configuration,
                    pinned_rigidity_matrix, rank, sample_regular_configuration)

MOVE_TOL = 1e-7


@dataclass
class DriverReport:
    edge: str
    velocity: dict
    norms: dict
    moving: set
    stationary: set
    moving_components: set = field(default_factory=set)
    stationary_components: set = field(default_factory=set)
    driver_component: str | None = None

    def to_json(self) -> dict:
        return {
            "edge": self.edge,
            "velocity": {v: [float(x) for x in u] for v, u in self.velocity.items()},
            "moving": sorted(self.moving, key=vkey),
            "stationary": sorted(self.stationary, key=vkey),
            "moving_components": sorted(self.moving_components, key=vkey),
            "stationary_components": sorted(self.stationary_components, key=vkey),
            "driver_component": self.driver_component,
        }


def driver_component(gg: GainGraph, dec: AssurDecomposition, eid) -> str:
    """The component whose rows contain the edge: the higher of its inner endpoints."""
    e = gg.edge(eid)
    pos = {c: i for i, c in enumerate(dec.linear_extension)}
    cof = dec.component_of
    ends = [cof[v] for v in (e.tail, e.head) if not gg.is_pin(v)]
    return max(ends, key=lambda c: pos[c])


def drive(gg: GainGraph, cfg: Configuration, eid, dec: AssurDecomposition | None = None,
          move_tol: float = MOVE_TOL, tol: float = RANK_TOL) -> DriverReport:
    """Velocity produced by changing the length of edge orbit ``eid`` at unit rate.

    Solves ``O U = e_k`` for the driver's row ``k``. A vertex is moving when its
    velocity block norm exceeds ``move_tol`` times the largest block norm.
    """
    M = build_orbit_matrix(gg, cfg)
    n, c = M.shape
    if n != c:
        raise NotIsostatic(f"orbit matrix is {n}x{c}, not square")
    if rank(M, tol) < c:
        raise SingularMatrix("orbit matrix is singular at this configuration; resample")
    k = M.row(eid)
    rhs = np.zeros(n)
    rhs[k] = 1.0
    U = np.linalg.solve(M.matrix, rhs)
    vel = M.split(U)
    norms = {v: float(np.linalg.norm(u)) for v, u in vel.items()}
    top = max(norms.values(), default=0.0)
    moving = {v for v, x in norms.items() if x > move_tol * top}
    stationary = set(vel) - moving
    rep = DriverReport(eid, vel, norms, moving, stationary)
    if dec is not None:
        cof = dec.component_of
        rep.moving_components = {cof[v] for v in moving}
        rep.stationary_components = set(dec.components) - rep.moving_components
        rep.driver_component = driver_component(gg, dec, eid)
    return rep


@dataclass
class StrongReport:
    strongly: bool
    per_edge: dict
    """edge id -> sorted list of inner vertices that stay put (majority over trials)"""


def strongly_assur_report(gg: GainGraph, trials: int = 5, seed: int = 0) -> StrongReport:
    per_edge = {}
    votes = {e.id: Counter() for e in gg.edges}
    used = 0
    t = 0
    while used < trials and t < 4 * trials:
        cfg = sample_regular_configuration(gg, seed + t)
        t += 1
        try:
            reports = [drive(gg, cfg, e.id) for e in gg.edges]
        except SingularMatrix:
            continue
        used += 1
        for r in reports:
            votes[r.edge][frozenset(r.stationary)] += 1
    if used == 0:
        raise SingularMatrix("no regular configuration found")
    for eid, c in votes.items():
        still = c.most_common(1)[0][0]
        per_edge[eid] = sorted(still, key=vkey)
    return StrongReport(all(not s for s in per_edge.values()), per_edge)


def is_strongly_S_assur(gg: GainGraph, trials: int = 5, seed: int = 0) -> bool:
    """Every single edge-orbit driver moves every inner orbit."""
    if not is_pinned_S_isostatic(gg, trials, seed):
        raise NotAssur("graph is not pinned isostatic under its symmetry group")
    if len(decompose(gg)) != 1:
        raise NotAssur("graph has more than one symmetric Assur component")
    return strongly_assur_report(gg, trials, seed).strongly


def covering_motion_dimension(gg: GainGraph, cfg: Configuration, eid) -> int:
    """Nullity of the plain pinned rigidity matrix of the covering framework with
    the whole orbit of ``eid`` removed. Reported as evidence only."""
    cg = cover(gg)
    pts = lift_configuration(gg, cg, cfg).points
    edges = [(ce, a, b) for ce, a, b, qe, _ in cg.edges if qe != eid]
    R = pinned_rigidity_matrix(cg.inner, edges, pts)
    return R.shape[1] - rank(R)
