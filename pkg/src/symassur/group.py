"""Finite point groups (Schoenflies families Cs, Cn, Cnv) and their actions on R^d.

Group elements are abstract names; the orthogonal matrices live in a separate
:class:`Representation` so that two elements never collide just because their
matrices happen to agree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import GroupError

ATOL = 1e-12
IDENTITY = "id"


def _rotation_name(k: int) -> str:
    return IDENTITY if k == 0 else f"r{k}"


def _element_name(flip: int, k: int) -> str:
    if not flip:
        return _rotation_name(k)
    return "s" if k == 0 else f"s·r{k}"


def canonical_name(name: str) -> str:
    """Accept the ASCII spellings ``s*r1`` / ``s.r1`` / ``e`` for elements."""
    name = str(name).strip()
    if name in ("e", "1", "E", "I"):
        return IDENTITY
    for sep in ("*", "."):
        name = name.replace(sep, "·")
    return name


@dataclass(frozen=True, eq=False)
class Group:
    """A finite group given by its multiplication table.

    ``elements[0]`` is always the identity.
    """

    elements: tuple
    table: dict = field(repr=False)
    name: str = "C1"
    n: int = 1

    def __post_init__(self):
        self._verify()

    @property
    def identity(self) -> str:
        return self.elements[0]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.table_index

    @property
    def table_index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    def mul(self, x, y):
        return self.table[x, y]

    def prod(self, *xs):
        out = self.identity
        for x in xs:
            out = self.table[out, x]
        return out

    def inv(self, x):
        return self._inverses[x]

    def power(self, x, k: int):
        out = self.identity
        base = x if k >= 0 else self.inv(x)
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def element_order(self, x) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def check(self, x) -> str:
        """Return the canonical element name or raise ``GroupError``."""
        c = canonical_name(x)
        if c not in self.table_index:
            raise GroupError(f"unknown group element {x!r} for {self.name}")
        return c

    def sort_key(self, x) -> int:
        return self.table_index[x]

    def is_subgroup(self, subset: Iterable) -> bool:
        sub = set(subset)
        if self.identity not in sub:
            return False
        return all(self.mul(a, self.inv(b)) in sub for a in sub for b in sub)

    def closure(self, generators: Iterable) -> frozenset:
        sub = {self.identity, *generators}
        while True:
            new = {self.mul(a, b) for a in sub for b in sub} - sub
            if not new:
                return frozenset(sub)
            sub |= new

    def subgroup(self, subset: Iterable, name: str | None = None) -> "Group":
        sub = set(self.check(x) for x in subset)
        if not self.is_subgroup(sub):
            raise GroupError(f"{sorted(sub, key=self.sort_key)} is not a subgroup of {self.name}")
        elems = tuple(sorted(sub, key=self.sort_key))
        table = {(a, b): self.mul(a, b) for a in elems for b in elems}
        return Group(elems, table, name=name or f"subgroup of {self.name}", n=len(elems))

    def _verify(self):
        elems = self.elements
        idx = set(elems)
        if len(idx) != len(elems):
            raise GroupError("duplicate element names")
        e = elems[0]
        for a in elems:
            for b in elems:
                if self.table.get((a, b)) not in idx:
                    raise GroupError(f"table not closed at ({a}, {b})")
        for a in elems:
            if self.table[e, a] != a or self.table[a, e] != a:
                raise GroupError(f"{e!r} is not neutral for {a!r}")
        for a, b, c in itertools.product(elems, repeat=3):
            if self.table[self.table[a, b], c] != self.table[a, self.table[b, c]]:
                raise GroupError(f"not associative at ({a}, {b}, {c})")
        inverses = {}
        for a in elems:
            hits = [b for b in elems if self.table[b, a] == e]
            if len(hits) != 1 or self.table[a, hits[0]] != e:
                raise GroupError(f"{a!r} has no unique inverse")
            inverses[a] = hits[0]
        object.__setattr__(self, "_inverses", inverses)


@dataclass(frozen=True, eq=False)
class Representation:
    """Orthogonal action ``tau`` of a group on R^d."""

    group: Group
    dimension: int
    tau: dict = field(repr=False)

    def __post_init__(self):
        d = self.dimension
        eye = np.eye(d)
        g = self.group
        for x in g:
            m = np.asarray(self.tau[x], dtype=float)
            if m.shape != (d, d):
                raise GroupError(f"tau({x}) has shape {m.shape}, expected {(d, d)}")
            if not np.allclose(m.T @ m, eye, atol=ATOL, rtol=0):
                raise GroupError(f"tau({x}) is not orthogonal")
        if not np.allclose(self.tau[g.identity], eye, atol=ATOL, rtol=0):
            raise GroupError("tau(identity) must be the identity matrix")
        for x in g:
            for y in g:
                if not np.allclose(self.tau[x] @ self.tau[y], self.tau[g.mul(x, y)], atol=ATOL, rtol=0):
                    raise GroupError(f"tau is not a homomorphism at ({x}, {y})")

    def __call__(self, x) -> np.ndarray:
        return self.tau[x]

    def restrict(self, subgroup: Group) -> "Representation":
        return Representation(subgroup, self.dimension, {x: self.tau[x] for x in subgroup})


@dataclass(frozen=True, eq=False)
class FixedSubspace:
    stabilizer: frozenset
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _unit(v, d, what):
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (d,):
        raise GroupError(f"{what} must have {d} components")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise GroupError(f"{what} must be a unit vector, got norm {np.linalg.norm(v):.6g}")
    return v / np.linalg.norm(v)


def _rotation(d: int, theta: float, axis=None) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    if d == 2:
        return np.array([[c, -s], [s, c]])
    k = axis
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + s * K + (1 - c) * (K @ K)


def _exact_cos_sin(n: int, k: int):
    # snap to the exact zeros so tau(C4), tau(C2) have integer entries
    theta = 2 * np.pi * k / n
    c, s = np.cos(theta), np.sin(theta)
    c = 0.0 if abs(c) < 1e-15 else c
    s = 0.0 if abs(s) < 1e-15 else s
    return c, s


def make_schoenflies(tag: str, n: int = 1, d: int = 2, axis=None, mirror_normal=None):
    """Build ``(Group, Representation)`` for Cs, Cn or Cnv acting on R^d.

    In the plane, rotations are about the origin and ``mirror_normal`` is the
    normal of the mirror line (default: the y-axis is the mirror). In 3-space,
    ``axis`` is the rotation axis (default z) and the mirror of Cs defaults to
    the xy-plane; for Cnv the mirror must contain the axis.
    """
    tag = str(tag).strip()
    if d not in (2, 3):
        raise GroupError(f"dimension must be 2 or 3, got {d}")
    if tag in ("C1", "E"):
        tag, n = "Cn", 1
    if tag not in ("Cs", "Cn", "Cnv"):
        raise GroupError(f"unsupported Schoenflies tag {tag!r}")
    if tag == "Cs":
        n = 1
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise GroupError(f"n must be a positive integer, got {n!r}")
    n = int(n)

    if d == 3:
        axis = _unit([0, 0, 1] if axis is None else axis, 3, "axis")
    elif axis is not None and len(axis) == 3:
        # 3-vectors are tolerated for the planar case (rotation about the normal)
        axis = None

    flips = (0, 1) if tag in ("Cs", "Cnv") else (0,)
    if tag == "Cs" and d == 3 and mirror_normal is None:
        mirror_normal = [0, 0, 1]
    if mirror_normal is None:
        if d == 2:
            mirror_normal = [1, 0]
        else:
            # any unit vector orthogonal to the axis
            trial = np.array([1.0, 0, 0]) if abs(axis[0]) < 0.9 else np.array([0, 1.0, 0])
            trial -= trial.dot(axis) * axis
            mirror_normal = trial / np.linalg.norm(trial)
    normal = _unit(mirror_normal, d, "mirror_normal")
    if tag == "Cnv" and d == 3 and n > 1 and abs(normal.dot(axis)) > 1e-9:
        raise GroupError("the Cnv mirror plane must contain the rotation axis")

    R = np.eye(d)
    if n > 1:
        c, s = _exact_cos_sin(n, 1)
        if d == 2:
            R = np.array([[c, -s], [s, c]])
        else:
            R = _rotation(3, 2 * np.pi / n, axis)
            R[np.abs(R) < 1e-15] = 0.0
    S = np.eye(d) - 2.0 * np.outer(normal, normal)

    keys = [(f, k) for f in flips for k in range(n)]
    names = {key: _element_name(*key) for key in keys}

    def compose(a, b):
        (f1, k1), (f2, k2) = a, b
        return ((f1 + f2) % 2, ((-k1 if f2 else k1) + k2) % n)

    table = {(names[a], names[b]): names[compose(a, b)] for a in keys for b in keys}
    label = {"Cs": "Cs", "Cn": f"C{n}", "Cnv": f"C{n}v"}[tag]
    group = Group(tuple(names[k] for k in keys), table, name=label, n=n)

    tau = {}
    for f, k in keys:
        m = np.linalg.matrix_power(S, f) @ np.linalg.matrix_power(R, k)
        tau[names[f, k]] = m
    rep = Representation(group, d, tau)
    object.__setattr__(group, "schoenflies", tag)
    return group, rep


def trivial_group(d: int = 2):
    return make_schoenflies("Cn", 1, d)


def _null_space(A: np.ndarray, atol: float = 1e-9) -> np.ndarray:
    """Right null space with an absolute singular-value cutoff.

    The matrices here have O(1) entries, so an absolute threshold avoids the
    relative-cutoff trap where an all-roundoff matrix looks full rank.
    """
    if A.size == 0:
        return np.eye(A.shape[1])
    _, s, vt = np.linalg.svd(A)
    r = int(np.sum(s > atol))
    return vt[r:].T.copy()


def _tidy_basis(N: np.ndarray, d: int) -> np.ndarray:
    """Orthonormal basis of span(N), aligned with coordinate axes when possible."""
    m = N.shape[1]
    if m == 0:
        return np.zeros((d, 0))
    if m == d:
        return np.eye(d)
    P = N @ N.T
    Q, _, piv = scipy.linalg.qr(P, pivoting=True)
    B = Q[:, :m]
    for j in range(m):
        i = np.argmax(np.abs(B[:, j]))
        if B[i, j] < 0:
            B[:, j] = -B[:, j]
    B[np.abs(B) < 1e-15] = 0.0
    return B


def fixed_subspace(rep: Representation, stabilizer: Iterable) -> FixedSubspace:
    """Common fixed space of all stabilizer matrices, as an orthonormal basis."""
    g = rep.group
    stab = frozenset(g.check(x) for x in stabilizer) | {g.identity}
    if not g.is_subgroup(stab):
        raise GroupError(f"stabilizer {sorted(stab, key=g.sort_key)} is not closed under multiplication")
    d = rep.dimension
    rows = [rep(x) - np.eye(d) for x in sorted(stab, key=g.sort_key) if x != g.identity]
    if not rows:
        return FixedSubspace(stab, np.eye(d))
    N = _null_space(np.vstack(rows))
    return FixedSubspace(stab, _tidy_basis(N, d))


def _skew_basis(d: int) -> list:
    out = []
    for i, j in itertools.combinations(range(d), 2):
        E = np.zeros((d, d))
        E[i, j], E[j, i] = -1.0, 1.0
        out.append(E)
    return out


def symmetric_trivial_motions(rep: Representation, fix_origin: bool = False) -> list:
    """Basis of fully symmetric trivial motions ``p -> t + A p`` as ``(t, A)`` pairs.

    With ``fix_origin`` the translation part is dropped, leaving the symmetric
    rotations that keep a pin at the origin in place.
    """
    d = rep.dimension
    skews = _skew_basis(d)
    nt = 0 if fix_origin else d
    blocks = []
    for x in rep.group:
        T = rep(x)
        trans = np.zeros((d + d * d, nt))
        if nt:
            trans[:d, :] = T - np.eye(d)
        rot = np.zeros((d + d * d, len(skews)))
        for k, E in enumerate(skews):
            rot[d:, k] = (T @ E @ T.T - E).reshape(-1)
        blocks.append(np.hstack([trans, rot]))
    A = np.vstack(blocks)
    if A.shape[1] == 0:
        return []
    N = _null_space(A)
    out = []
    for z in N.T:
        t = z[:nt] if nt else np.zeros(d)
        M = sum((c * E for c, E in zip(z[nt:], skews)), np.zeros((d, d)))
        out.append((t, M))
    return out


def trivial_symmetric_dimension(rep: Representation, has_pins: bool = False) -> int:
    """Dimension of the fully symmetric trivial infinitesimal motions.

    ``has_pins=True`` counts only the motions that also fix a pin at the origin
    (i.e. symmetric rotations), which is the correction used for subgraphs
    containing a pin fixed by the whole group.
    """
    return len(symmetric_trivial_motions(rep, fix_origin=has_pins))


def parse_group_spec(spec: dict, d: int):
    """Build ``(Group, Representation)`` from the JSON group object."""
    tag = spec.get("schoenflies", "C1")
    n = spec.get("n", 1)
    return make_schoenflies(tag, n, d, axis=spec.get("axis"), mirror_normal=spec.get("mirror_normal"))
