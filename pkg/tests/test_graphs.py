import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from generators import random_isostatic
from oracles import gain_equivalent
from symassur.errors import GraphError, InstanceTooLarge
from symassur.graphs import (Edge, GainGraph, Vertex, cover, gain_sparse, is_balanced, pinned_isostatic_counts,
                             quotient, quotient_of_cover)
from symassur.group import make_schoenflies
from symassur.io import fixture_names, load_fixture

C2 = make_schoenflies("Cn", 2, 2)[1]

# six-vertex half-turn symmetric graph and its action 1<->4, 2<->5, 3<->6
HALF_TURN_EDGES = [("23", "2", "3"), ("12", "1", "2"), ("13", "1", "3"), ("14", "1", "4"), ("26", "2", "6"),
               ("53", "5", "3"), ("64", "6", "4"), ("65", "6", "5"), ("54", "5", "4")]
HALF_TURN_ACTION = {"id": {str(i): str(i) for i in range(1, 7)},
                "r1": {"1": "4", "4": "1", "2": "5", "5": "2", "3": "6", "6": "3"}}


def c2_loop():
    return load_fixture("c2_loop").gain_graph


def test_cover_of_c2_loop_is_half_turn_cover():
    cg = cover(c2_loop())
    assert len(cg.vertices) == 6 and len(cg.edges) == 9
    # the loop edge orbit is fixed by the half-turn
    assert len(cg.edge_fiber("loop")) == 1


def test_quotient_of_half_turn_cover_is_c2_loop():
    kinds = {str(i): "inner" for i in range(1, 7)}
    q = quotient(kinds, HALF_TURN_EDGES, HALF_TURN_ACTION, C2)
    assert sorted(q.vertices) == ["1", "2", "3"]
    assert len(q.edges) == 5
    assert gain_equivalent(c2_loop(), q)


def test_quotient_of_four_cycle():
    kinds = {str(i): "inner" for i in range(1, 5)}
    edges = [("14", "1", "4"), ("43", "4", "3"), ("32", "3", "2"), ("21", "2", "1")]
    action = {"id": {k: k for k in kinds}, "r1": {"1": "3", "3": "1", "2": "4", "4": "2"}}
    q = quotient(kinds, edges, action, C2)
    assert sorted(q.vertices) == ["1", "2"]
    assert sorted(e.gain for e in q.edges) == ["id", "r1"]
    assert all({e.tail, e.head} == {"1", "2"} for e in q.edges)


def test_identity_action_quotient_is_the_graph():
    rep = make_schoenflies("Cn", 1, 2)[1]
    kinds = {"a": "inner", "b": "inner", "p": "pin"}
    edges = [("x", "a", "b"), ("y", "a", "p"), ("z", "b", "p")]
    q = quotient(kinds, edges, {"id": {k: k for k in kinds}}, rep)
    assert {(e.tail, e.head, e.gain) for e in q.edges} == {("a", "b", "id"), ("a", "p", "id"), ("b", "p", "id")}


def test_quotient_rejects_bad_actions():
    kinds = {"1": "inner", "2": "pin"}
    with pytest.raises(GraphError):
        quotient(kinds, [("e", "1", "2")], {"id": {"1": "1", "2": "2"}, "r1": {"1": "2", "2": "1"}}, C2)
    kinds = {str(i): "inner" for i in range(1, 5)}
    bad = {"id": {k: k for k in kinds}, "r1": {"1": "2", "2": "1", "3": "4", "4": "3"}}
    with pytest.raises(GraphError):
        quotient(kinds, [("e", "1", "3")], bad, C2)


def test_c3_cover_counts(c3):
    cg = cover(c3.gain_graph)
    assert len(cg.inner) == 6 and len(cg.pins) == 3
    assert len(cg.edges) == 12


def fiber_sizes_hold(gg):
    cg = cover(gg)
    g = gg.group
    for v in gg.vertices:
        assert len(cg.vertex_fiber(v)) == len(g) // len(gg.stabilizer(v))
    for e in gg.edges:
        size = len(cg.edge_fiber(e.id))
        if e.is_loop and g.mul(e.gain, e.gain) == g.identity:
            assert size == len(g) // 2
        elif all(len(gg.stabilizer(v)) == 1 for v in (e.tail, e.head)):
            assert size == len(g)
        else:
            # an edge orbit between fixed points is as large as the orbit of its far end
            assert size in {len(g) // len(gg.stabilizer(v)) for v in (e.tail, e.head)}


@pytest.mark.parametrize("name", fixture_names())
def test_fiber_sizes_on_fixtures(name):
    fiber_sizes_hold(load_fixture(name).gain_graph)


@pytest.mark.parametrize("name", fixture_names())
def test_quotient_of_cover_round_trip(name):
    gg = load_fixture(name).gain_graph
    q = quotient_of_cover(cover(gg), gg.rep)
    assert gain_equivalent(gg, q, rename=lambda v: v.split("@")[0])
    for v in gg.vertices:
        assert q.stabilizer(f"{v}@id") == gg.stabilizer(v)


def test_identity_group_cover_is_the_graph():
    rep = make_schoenflies("Cn", 1, 2)[1]
    gg = GainGraph(rep, [Vertex("a"), Vertex("b"), Vertex("p", "pin")],
                   [Edge("x", "a", "b"), Edge("y", "a", "p"), Edge("z", "b", "p")])
    cg = cover(gg)
    assert len(cg.vertices) == 3 and len(cg.edges) == 3
    with pytest.raises(GraphError):
        GainGraph(rep, [Vertex("a")], [Edge("l", "a", "a")])


def test_parse_time_rejections():
    with pytest.raises(GraphError):
        GainGraph(C2, [Vertex("p", "pin"), Vertex("q", "pin")], [Edge("e", "p", "q")])
    with pytest.raises(GraphError):
        GainGraph(C2, [Vertex("a")], [Edge("l", "a", "a", "id")])
    with pytest.raises(GraphError):
        GainGraph(C2, [Vertex("a", stabilizer=frozenset({"id", "r1"}))], [Edge("l", "a", "a", "r1")])


def test_balance():
    gg = GainGraph(C2, [Vertex("u"), Vertex("v")], [Edge("a", "u", "v", "id"), Edge("b", "u", "v", "r1")])
    assert not is_balanced(gg, ["a", "b"])
    assert is_balanced(gg, ["a"])
    g = c2_loop()
    assert is_balanced(g, ["a", "b"])
    assert not is_balanced(g, ["loop"])
    assert is_balanced(g, ["a", "b", "c"])
    assert not is_balanced(g, ["a", "b", "f"])


def test_balance_under_switching_nonabelian():
    rep = make_schoenflies("Cnv", 3, 2)[1]
    g = rep.group
    gg = GainGraph(rep, [Vertex("a"), Vertex("b"), Vertex("c")],
                   [Edge("1", "a", "b", "s"), Edge("2", "b", "c", "r1"), Edge("3", "a", "c", g.mul("s", "r1"))])
    assert is_balanced(gg, ["1", "2", "3"])
    gg2 = gg.replace(edges=[Edge("1", "a", "b", "s"), Edge("2", "b", "c", "r1"), Edge("3", "a", "c", g.mul("r1", "s"))])
    assert not is_balanced(gg2, ["1", "2", "3"])


def test_c2_loop_sparsity():
    v = gain_sparse(c2_loop(), 2, 3, 1)
    assert v.satisfied and v.tight
    w = gain_sparse(c2_loop(), 2, 3, 2)
    assert not w.satisfied
    assert w.witness == ("loop",) and w.n_edges == 1 and w.n_vertices == 1 and w.balanced is False


def test_sparsity_empty_graph():
    gg = GainGraph(C2, [Vertex("a")], [])
    assert gain_sparse(gg, 2, 3, 1).satisfied


def test_sparsity_edge_bound():
    gg = c2_loop()
    with pytest.raises(InstanceTooLarge):
        gain_sparse(gg, 2, 3, 1, edge_bound=4)


def test_counts_on_fixtures():
    assert pinned_isostatic_counts(load_fixture("c3_desargues").gain_graph).satisfied
    gb = load_fixture("grab_bucket").gain_graph
    assert len(gb.edges) == 7 and gb.column_count() == 7
    assert pinned_isostatic_counts(gb).satisfied


def test_counts_undercounted():
    rep = make_schoenflies("Cn", 1, 2)[1]
    gg = GainGraph(rep, [Vertex("a"), Vertex("p", "pin")], [Edge("e", "a", "p")])
    v = pinned_isostatic_counts(gg)
    assert not v.satisfied and "columns" in v.reason


def test_counts_pin_on_rotation_centre():
    # a vertex tied twice to the centre pin: the symmetric rotation about the centre survives
    rep = make_schoenflies("Cn", 3, 2)[1]
    gg = GainGraph(rep, [Vertex("a"), Vertex("o", "pin", frozenset({"id", "r1", "r2"}))],
                   [Edge("e", "a", "o"), Edge("f", "a", "a", "r1")])
    v = pinned_isostatic_counts(gg)
    assert not v.satisfied and v.bound == 1


def test_identity_group_counts_match_laman_style_counts():
    rep = make_schoenflies("Cn", 1, 2)[1]
    tri = GainGraph(rep, [Vertex("a"), Vertex("b"), Vertex("p", "pin"), Vertex("q", "pin")],
                    [Edge("1", "a", "p"), Edge("2", "a", "q"), Edge("3", "b", "a"), Edge("4", "b", "p")])
    assert pinned_isostatic_counts(tri).satisfied
    bad = tri.replace(edges=[Edge("1", "a", "p"), Edge("2", "a", "q"), Edge("3", "a", "p"), Edge("4", "b", "p")])
    v = pinned_isostatic_counts(bad)
    assert not v.satisfied
    assert set(v.witness) >= {"1", "3"}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_extension_graphs_pass_counts(seed):
    rng = np.random.default_rng(seed)
    gg = random_isostatic(rng, n_inner=int(rng.integers(1, 5)))
    assert pinned_isostatic_counts(gg).satisfied
    fiber_sizes_hold(gg)
