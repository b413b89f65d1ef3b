"""Growing a C4-symmetric chain by 1-extensions and watching the decomposition change.

A 1-extension deletes an edge xy, adds a vertex joined to x and y, and adds
one more edge to a third vertex w. Where w sits relative to xy decides the
effect on the components.
"""
# %%
from symassur import ExtensionSpec, classify_one_extension, decompose, load_fixture

gg = load_fixture("c4_chain").gain_graph
dec = decompose(gg)
print("before:", dec.components, sorted(dec.block_edges))

for edge, w in (("a1a2", "a1"), ("ca1", "a2"), ("a1a2", "d")):
    e = gg.edge(edge)
    spec = ExtensionSpec("one", "v", targets=(w,), gains=("r1",), edge=edge, gamma1="id", gamma2=e.gain)
    c = classify_one_extension(gg, dec, spec)
    print(f"delete {edge}, attach to {w}: predicted {c.label}, recomputed {c.recomputed}")
    print("   ", c.decomposition.components)
