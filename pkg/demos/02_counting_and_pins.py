"""Counting conditions, stabilized vertices and what symmetry adds.

The grab bucket has a vertex and a pin on the mirror. Each contributes fewer
columns, and the bottom component is a single bar that only counts as rigid
once the mirror symmetry is enforced.
"""
# %%
from symassur import (cover, decompose, extended_component, gain_sparse, is_pinned_S_isostatic, is_S_assur,
                      load_fixture, pinned_isostatic_counts, trivial_rep)

gb = load_fixture("grab_bucket").gain_graph
print(gb, " columns:", gb.column_count())
for v in gb.vertices:
    print(f"  {v}: stabilizer {sorted(gb.stabilizer(v))}, columns {gb.m(v)}")
print(pinned_isostatic_counts(gb))
print("isostatic:", is_pinned_S_isostatic(gb).isostatic)

dec = decompose(gb)
print("components:", dec.components, "bottom first:", dec.linear_extension)
bottom = extended_component(gb, dec, dec.linear_extension[0])
print("bottom component edges:", bottom.edge_ids, " Assur:", is_S_assur(bottom))

# %% A gain graph with a C2 loop: it is (2,3,1)-gain-tight, but the loop breaks (2,3,2).
loopy = load_fixture("c2_loop").gain_graph
print(gain_sparse(loopy, 2, 3, 1))
print(gain_sparse(loopy, 2, 3, 2))

# %% A mirror-symmetric plane framework whose full covering graph is flexible.
twopins = load_fixture("cs_two_pins").gain_graph
sym = is_pinned_S_isostatic(twopins)
print(f"with Cs: {sym.rows}x{sym.cols}, ranks {sym.ranks}, isostatic {sym.isostatic}")
plain = cover(twopins).as_gain_graph(trivial_rep(2))
flat = is_pinned_S_isostatic(plain)
print(f"without symmetry: {flat.rows}x{flat.cols}, ranks {flat.ranks}, isostatic {flat.isostatic}")
dec7 = decompose(twopins)
print("components:", dec7.components)
print("block graph:", sorted(dec7.block_edges))
