"""A C3-symmetric framework in space that is Assur but not strongly Assur.

Vertex A sits on the rotation axis. Driving the purple edge orbit moves the
other two orbits but leaves A where it is.
"""
# %%
from symassur import is_S_assur, is_strongly_S_assur, load_fixture, strongly_assur_report

gg = load_fixture("c3_axis_space").gain_graph
print(gg)
print("Assur:", is_S_assur(gg))
print("strongly Assur:", is_strongly_S_assur(gg))
report = strongly_assur_report(gg)
for eid, still in report.per_edge.items():
    print(f"  driving {eid:7s} leaves stationary: {still}")

# %% Subgroups of C6: decompose the same covering graph under C3 and C2.
from symassur import decompose, subgroup_decomposition

c6 = load_fixture("c6_subgroups").gain_graph
dec = decompose(c6)
print("C6 components:", dec.components)
for elems in (["id", "r2", "r4"], ["id", "r3"], ["id"]):
    sub = subgroup_decomposition(c6, elems, dec)
    print(elems, "->", len(sub.decomposition), "components:", sub.decomposition.components)
