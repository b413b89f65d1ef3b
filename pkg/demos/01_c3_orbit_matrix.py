"""A C3-symmetric pinned framework: orbit matrix, decomposition and drivers.

The framework has two free vertex orbits (u and w) and one pinned orbit (v).
Its gain graph has four edges: two bars from u to the pins, one bar w-u and
a loop at w that stands for a triangle of bars in the full framework.
"""
# %%
import numpy as np

from symassur import (block_triangular_form, build_orbit_matrix, decompose, drive, lift_decomposition,
                      load_fixture)

ff = load_fixture("c3_desargues")
gg = ff.gain_graph
print(gg)
for e in gg.edges:
    print(f"  {e.id}: {e.tail} -> {e.head}  gain {e.gain}")

# %% The pinned orbit matrix has one row per edge orbit and two columns per free vertex orbit.
M = build_orbit_matrix(gg, ff.positions)
np.set_printoptions(precision=4, suppress=True)
print(M.rows)
print(M.matrix)
print("rank", np.linalg.matrix_rank(M.matrix))

# %% Orienting each free vertex with out-degree 2 and taking strongly connected
# components gives the symmetric Assur decomposition.
dec = decompose(gg)
print("components:", dec.components)
print("block graph (upper, lower):", sorted(dec.block_edges))
print("bottom first:", dec.linear_extension)

bt = block_triangular_form(M, gg, dec)
print("block lower triangular:", bt.verified, " largest entry above the blocks:", bt.max_offdiag)
print(bt.matrix)

# %% Turning an edge orbit into a driver: the bottom component's driver moves
# everything above it, the loop in the top component moves only that component.
for eid in ("e1", "e4"):
    r = drive(gg, ff.positions, eid, dec)
    print(eid, {v: round(x, 4) for v, x in r.norms.items()}, "stationary:", sorted(r.stationary))

# %% Unrolling the symmetry: u lifts to three separate single-vertex components,
# w lifts to one triangle.
lifted = lift_decomposition(gg, dec)
for c, vs in sorted(lifted.decomposition.components.items()):
    print(f"  {c}: {vs}  (orbit component {lifted.parent[c]})")
