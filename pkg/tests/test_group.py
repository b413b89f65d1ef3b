import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import matrix_group_table
from symassur.errors import GroupError
from symassur.group import fixed_subspace, make_schoenflies, trivial_symmetric_dimension

SQ3 = np.sqrt(3)


def test_c3_generator_matrix():
    _, rep = make_schoenflies("Cn", 3, 2)
    np.testing.assert_allclose(rep("r1"), [[-0.5, -SQ3 / 2], [SQ3 / 2, -0.5]], atol=1e-15)


def test_trivial_group():
    g, rep = make_schoenflies("Cn", 1, 2)
    assert g.elements == ("id",)
    np.testing.assert_array_equal(rep("id"), np.eye(2))


def test_c2v_in_space_is_diagonal_and_matches_matrix_table():
    g, rep = make_schoenflies("Cnv", 2, 3, axis=[0, 0, 1])
    assert len(g) == 4
    for x in g:
        m = rep(x)
        assert np.allclose(m, np.diag(np.diag(m)))
        assert set(np.round(np.diag(m)).astype(int)) <= {-1, 1}
    dets = sorted(round(np.linalg.det(rep(x))) for x in g)
    assert dets == [-1, -1, 1, 1]
    assert matrix_group_table(rep) == dict(g.table)


@pytest.mark.parametrize("tag,n,size", [("Cs", 1, 2), ("Cn", 5, 5), ("Cnv", 3, 6), ("Cnv", 6, 12)])
def test_group_orders(tag, n, size):
    for d in (2, 3):
        g, _ = make_schoenflies(tag, n, d)
        assert len(g) == size


@pytest.mark.parametrize("tag,n", [("Cs", 1), ("Cn", 2), ("Cn", 3), ("Cn", 6), ("Cnv", 2), ("Cnv", 3), ("Cnv", 4)])
@pytest.mark.parametrize("d", [2, 3])
def test_abstract_table_agrees_with_matrices(tag, n, d):
    g, rep = make_schoenflies(tag, n, d)
    assert matrix_group_table(rep) == dict(g.table)


def test_dihedral_relation_and_ascii_names():
    g, _ = make_schoenflies("Cnv", 4, 2)
    assert g.mul("r1", "s") == "s·r3"
    assert g.check("s*r1") == "s·r1"
    assert g.inv("r1") == "r3"


@pytest.mark.parametrize("bad", [dict(n=0), dict(axis=[0, 0, 2])])
def test_invalid_parameters(bad):
    with pytest.raises(GroupError):
        make_schoenflies("Cn", bad.get("n", 3), 3, axis=bad.get("axis"))


def test_cnv_mirror_must_contain_axis():
    with pytest.raises(GroupError):
        make_schoenflies("Cnv", 3, 3, axis=[0, 0, 1], mirror_normal=[0, 0, 1])


def test_fixed_subspace_mirror_plane():
    _, rep = make_schoenflies("Cs", 1, 3, mirror_normal=[0, 0, 1])
    fs = fixed_subspace(rep, ["id", "s"])
    assert fs.dim == 2
    np.testing.assert_allclose(fs.basis, [[1, 0], [0, 1], [0, 0]], atol=1e-15)


def test_fixed_subspace_trivial_and_half_turn():
    _, rep = make_schoenflies("Cn", 2, 2)
    np.testing.assert_array_equal(fixed_subspace(rep, ["id"]).basis, np.eye(2))
    assert fixed_subspace(rep, ["id", "r1"]).dim == 0


def test_fixed_subspace_rejects_non_subgroup():
    _, rep = make_schoenflies("Cn", 3, 2)
    with pytest.raises(GroupError):
        fixed_subspace(rep, ["r1"])


def test_axis_is_fixed_line():
    _, rep = make_schoenflies("Cn", 3, 3, axis=[0, 0, 1])
    fs = fixed_subspace(rep, ["id", "r1", "r2"])
    np.testing.assert_allclose(np.abs(fs.basis.ravel()), [0, 0, 1], atol=1e-12)


@pytest.mark.parametrize("tag,n,d,expected", [
    ("Cs", 1, 2, 1), ("Cs", 1, 3, 3), ("Cn", 3, 3, 2), ("Cn", 5, 3, 2), ("Cn", 4, 2, 1), ("Cnv", 2, 2, 0),
])
def test_trivial_symmetric_dimension(tag, n, d, expected):
    assert trivial_symmetric_dimension(make_schoenflies(tag, n, d)[1]) == expected


@pytest.mark.parametrize("d", [2, 3])
def test_identity_group_has_all_trivial_motions(d):
    rep = make_schoenflies("Cn", 1, d)[1]
    assert trivial_symmetric_dimension(rep) == d + d * (d - 1) // 2


def test_pinned_origin_keeps_only_symmetric_rotations():
    assert trivial_symmetric_dimension(make_schoenflies("Cn", 3, 2)[1], has_pins=True) == 1
    assert trivial_symmetric_dimension(make_schoenflies("Cs", 1, 2)[1], has_pins=True) == 0
    assert trivial_symmetric_dimension(make_schoenflies("Cn", 3, 3)[1], has_pins=True) == 1


groups = st.sampled_from([("Cs", 1), ("Cn", 2), ("Cn", 3), ("Cn", 4), ("Cn", 6), ("Cnv", 2), ("Cnv", 3), ("Cnv", 5)])


@settings(max_examples=40, deadline=None)
@given(groups, st.sampled_from([2, 3]))
def test_group_axioms_and_orthogonality(gspec, d):
    g, rep = make_schoenflies(gspec[0], gspec[1], d)
    for a, b, c in itertools.product(g, repeat=3):
        assert g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))
    for a in g:
        assert g.mul(g.inv(a), a) == g.identity
        assert np.allclose(rep(a).T @ rep(a), np.eye(d), atol=1e-12)
        for b in g:
            assert np.allclose(rep(a) @ rep(b), rep(g.mul(a, b)), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(groups, st.sampled_from([2, 3]), st.data())
def test_fixed_subspace_columns_are_fixed(gspec, d, data):
    g, rep = make_schoenflies(gspec[0], gspec[1], d)
    gen = data.draw(st.sampled_from(g.elements))
    stab = g.closure([gen])
    fs = fixed_subspace(rep, stab)
    for x in stab:
        assert np.allclose(rep(x) @ fs.basis, fs.basis, atol=1e-12)
    assert np.allclose(fs.basis.T @ fs.basis, np.eye(fs.dim), atol=1e-12)
    # dimension agrees with the averaged projector's trace
    P = sum(rep(x) for x in stab) / len(stab)
    assert fs.dim == round(np.trace(P))
