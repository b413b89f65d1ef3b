import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from generators import random_isostatic
from symassur.errors import NoOrientation
from symassur.graphs import Edge, GainGraph, Vertex
from symassur.group import make_schoenflies
from symassur.io import load_fixture
from symassur.orient import (FORWARD, REVERSE, Orientation, _reverse, _search, equivalent, random_orientation,
                             s_directed_orientation, verify_orientation)

C1 = make_schoenflies("Cn", 1, 2)[1]


def test_single_vertex_two_pin_edges():
    gg = GainGraph(C1, [Vertex("a"), Vertex("p", "pin"), Vertex("q", "pin")],
                   [Edge("1", "p", "a"), Edge("2", "a", "q")])
    o = s_directed_orientation(gg)
    assert o.source(gg, "1") == "a" and o.source(gg, "2") == "a"
    assert o.direction == {"1": REVERSE, "2": FORWARD}


def test_c3_orientation(c3):
    gg = c3.gain_graph
    o = s_directed_orientation(gg)
    assert verify_orientation(gg, o)
    assert o.out_degrees(gg)["u"] == 2 and o.out_degrees(gg)["w"] == 2
    assert o.source(gg, "e4") == "w"


def test_overloaded_vertex():
    C3 = make_schoenflies("Cn", 3, 2)[1]
    gg = GainGraph(C3, [Vertex("u"), Vertex("p", "pin")],
                   [Edge("1", "u", "p", "id"), Edge("2", "u", "p", "r1"), Edge("3", "u", "p", "r2")])
    with pytest.raises(NoOrientation) as info:
        s_directed_orientation(gg)
    assert info.value.blocking == ("u",)


def test_blocking_set_is_the_overbraced_part():
    gg = load_fixture("c3_desargues").gain_graph
    extra = gg.with_edges([Edge("x", "u", "v", "r1")])
    with pytest.raises(NoOrientation) as info:
        s_directed_orientation(extra)
    assert "w" not in info.value.blocking


def test_verify_rejects_pin_out_edges(c3):
    gg = c3.gain_graph
    o = s_directed_orientation(gg)
    flipped = dict(o.direction)
    flipped["e1"] = REVERSE if flipped["e1"] == FORWARD else FORWARD
    assert not verify_orientation(gg, Orientation(flipped))


@pytest.mark.parametrize("name", ["c3_desargues", "c4_chain", "c3_axis_space", "cs_two_pins", "grab_bucket"])
def test_random_orientations_are_valid_and_equivalent(name):
    gg = load_fixture(name).gain_graph
    base = s_directed_orientation(gg)
    for seed in range(20):
        o = random_orientation(gg, seed)
        assert verify_orientation(gg, o)
        assert equivalent(gg, base, o)


def test_path_reversal_keeps_interior_out_degrees():
    rng = np.random.default_rng(3)
    for trial in range(20):
        gg = random_isostatic(rng, n_inner=5)
        o = s_directed_orientation(gg)
        out = {v: {} for v in gg.vertices}
        index = {e.id: i for i, e in enumerate(gg.edges)}
        src = {}
        for eid, s, t in o.arcs(gg):
            src[eid] = s
            if s != t:
                out[s][eid, index[eid]] = t
        pebbles = {v: 0 for v in gg.vertices}
        # free one pebble somewhere and pull it back to a random start
        holder = str(rng.choice(gg.inner))
        pebbles[holder] = 1
        start = str(rng.choice(gg.inner))
        path, end = _search(start, out, pebbles, None)
        if path is None:
            continue
        before = {v: len(out[v]) for v in gg.vertices}
        _reverse(path, end, start, out, src, gg, index, pebbles)
        after = {v: len(out[v]) for v in gg.vertices}
        for v in gg.vertices:
            if v not in (start, end):
                assert before[v] == after[v]
        if path:
            assert after[start] == before[start] - 1 and after[end] == before[end] + 1
            assert pebbles[start] == 1 and pebbles[end] == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_pebble_game_on_random_isostatic_graphs(seed):
    rng = np.random.default_rng(seed)
    gg = random_isostatic(rng)
    o = s_directed_orientation(gg)
    assert verify_orientation(gg, o)
    assert verify_orientation(gg, random_orientation(gg, seed))
