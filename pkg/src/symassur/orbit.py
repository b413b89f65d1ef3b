"""Configurations and the pinned orbit rigidity matrix."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GraphError
from .graphs import CoveringGraph, GainGraph

DENOMINATOR = 1_000_003
RANK_TOL = 1e-9


@dataclass
class Configuration:
    """Representative positions, one point per vertex orbit (pins included)."""

    points: dict

    def __getitem__(self, v) -> np.ndarray:
        return self.points[v]

    def check(self, gg: GainGraph, atol: float = 1e-12):
        for v in gg.vertices:
            if v not in self.points:
                raise GraphError(f"no position for vertex {v!r}")
            p = np.asarray(self.points[v], dtype=float)
            if p.shape != (gg.d,):
                raise GraphError(f"position of {v!r} must have {gg.d} coordinates")
            for x in gg.stabilizer(v):
                if np.max(np.abs(gg.rep(x) @ p - p)) > atol:
                    raise GraphError(f"position of {v!r} is not fixed by its stabilizer element {x!r}")
        return self

    def as_lists(self) -> dict:
        return {v: [float(c) for c in p] for v, p in self.points.items()}


def sample_regular_configuration(gg: GainGraph, seed: int = 0, denominator: int = DENOMINATOR) -> Configuration:
    """Random positions with rational coordinates ``k / denominator`` in [-10, 10].

    Stabilized vertices get random rational coordinates in an orthonormal basis
    of their fixed subspace. Random rational points stand in for genericity:
    the resulting configuration is regular with high probability, not provably.
    """
    rng = np.random.default_rng(seed)
    pts = {}
    for v in gg.vertices:
        B = gg.basis(v)
        k = rng.integers(-10 * denominator, 10 * denominator, size=B.shape[1], endpoint=True)
        pts[v] = B @ (k / denominator) if B.shape[1] else np.zeros(gg.d)
    return Configuration(pts)


@dataclass
class OrbitMatrix:
    matrix: np.ndarray
    rows: list
    columns: list
    blocks: dict = field(repr=False)

    @property
    def shape(self):
        return self.matrix.shape

    def row(self, eid) -> int:
        return self.rows.index(eid)

    def block(self, v) -> slice:
        return self.blocks[v]

    def split(self, U: np.ndarray) -> dict:
        """Split a column-space vector into per-vertex blocks."""
        return {v: U[s] for v, s in self.blocks.items()}

    def to_csv(self) -> str:
        head = ["edge"] + [f"{v}[{j}]" for v, j in self.columns]
        lines = [",".join(head)]
        for eid, r in zip(self.rows, self.matrix):
            lines.append(",".join([eid] + [repr(float(x)) for x in r]))
        return "\n".join(lines) + "\n"


def build_orbit_matrix(gg: GainGraph, cfg: Configuration, rep=None) -> OrbitMatrix:
    """Pinned orbit rigidity matrix: one row per edge orbit, ``m(v)`` columns per inner orbit.

    For ``u -> v`` with gain ``g`` the row has ``p(u) - tau(g) p(v)`` under ``u``
    and ``p(v) - tau(g)^-1 p(u)`` under ``v``; a loop at ``u`` gets the single
    block ``2 p(u) - tau(g) p(u) - tau(g)^-1 p(u)``, which is the general row
    with both ends set to ``u`` and the two blocks added; pins carry no columns.
    Blocks of stabilized vertices are multiplied by their fixed-subspace basis.
    """
    rep = rep or gg.rep
    cfg.check(gg, atol=1e-9)
    columns, blocks = [], {}
    for v in gg.inner:
        start = len(columns)
        columns.extend((v, j) for j in range(gg.m(v)))
        blocks[v] = slice(start, len(columns))
    M = np.zeros((len(gg.edges), len(columns)))
    p = {v: np.asarray(cfg[v], dtype=float) for v in gg.vertices}
    for i, e in enumerate(gg.edges):
        T = rep(e.gain)
        Ti = T.T
        u, v = e.tail, e.head
        if e.is_loop:
            M[i, blocks[u]] = (2 * p[u] - T @ p[u] - Ti @ p[u]) @ gg.basis(u)
            continue
        if not gg.is_pin(u):
            M[i, blocks[u]] = (p[u] - T @ p[v]) @ gg.basis(u)
        if not gg.is_pin(v):
            M[i, blocks[v]] = (p[v] - Ti @ p[u]) @ gg.basis(v)
    return OrbitMatrix(M, [e.id for e in gg.edges], columns, blocks)


def _mat(M):
    return M.matrix if isinstance(M, OrbitMatrix) else np.asarray(M, dtype=float)


def singular_values(M) -> np.ndarray:
    A = _mat(M)
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def rank(M, tol: float = RANK_TOL) -> int:
    """Numerical rank with threshold ``tol * sigma_max``."""
    s = singular_values(M)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def _null(A, tol):
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0))
    if m == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(A)
    r = 0 if s.size == 0 or s[0] == 0 else int(np.sum(s > tol * s[0]))
    return vt[r:].T.copy()


def motions(M, tol: float = RANK_TOL) -> np.ndarray:
    """Basis (as columns) of the right null space: fully symmetric infinitesimal motions."""
    return _null(_mat(M), tol)


def self_stresses(M, tol: float = RANK_TOL) -> np.ndarray:
    """Basis (as columns) of the left null space: fully symmetric self-stresses."""
    return _null(_mat(M).T, tol)


@dataclass
class IsostaticVerdict:
    isostatic: bool
    square: bool
    rows: int
    cols: int
    ranks: list
    witness: Configuration | None = None

    def __bool__(self):
        return self.isostatic


def is_pinned_S_isostatic(gg: GainGraph, trials: int = 5, seed: int = 0, tol: float = RANK_TOL) -> IsostaticVerdict:
    """Square orbit matrix reaching full rank at one of ``trials`` random configurations."""
    rows, cols = len(gg.edges), gg.column_count()
    if rows != cols:
        return IsostaticVerdict(False, False, rows, cols, [])
    ranks = []
    for t in range(trials):
        cfg = sample_regular_configuration(gg, seed + t)
        r = rank(build_orbit_matrix(gg, cfg), tol)
        ranks.append(r)
        if r == cols:
            return IsostaticVerdict(True, True, rows, cols, ranks, cfg)
    return IsostaticVerdict(False, True, rows, cols, ranks)


# ---------------------------------------------------------------------------
# Passing between the quotient and the covering framework
# ---------------------------------------------------------------------------

def lift_configuration(gg: GainGraph, cg: CoveringGraph, cfg: Configuration) -> Configuration:
    """Positions of the covering framework: ``p(x v) = tau(x) p(v)``."""
    return Configuration({name: gg.rep(x) @ np.asarray(cfg[v], dtype=float) for name, (v, x) in cg.vertices.items()})


def lift_motion(gg: GainGraph, cg: CoveringGraph, om: OrbitMatrix, U: np.ndarray) -> dict:
    """Velocities on the cover from an orbit-matrix motion: ``u(x v) = tau(x) B_v U_v``."""
    out = {}
    for name, (v, x) in cg.vertices.items():
        if cg.kinds[name] == "pin":
            out[name] = np.zeros(gg.d)
        else:
            out[name] = gg.rep(x) @ (gg.basis(v) @ U[om.block(v)])
    return out


def pinned_rigidity_matrix(inner: list, edges: list, points: dict) -> tuple:
    """Plain pinned rigidity matrix: rows ``(p_a - p_b)`` under ``a`` and ``(p_b - p_a)`` under ``b``."""
    d = len(next(iter(points.values())))
    col = {v: i for i, v in enumerate(inner)}
    R = np.zeros((len(edges), d * len(inner)))
    for i, (_, a, b) in enumerate(edges):
        diff = np.asarray(points[a], dtype=float) - np.asarray(points[b], dtype=float)
        if a in col:
            R[i, d * col[a]: d * col[a] + d] = diff
        if b in col:
            R[i, d * col[b]: d * col[b] + d] = -diff
    return R
