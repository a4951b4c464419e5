import json

import pytest

from feec.base import (
    FaceNotInComplex,
    Malformed,
    NonUniformDimension,
    NotAFace,
    NotSingleValued,
    ShapeMismatch,
    Unsupported,
)
from feec.forms import dlam, lam, make_term, one
from feec.simplicial import (
    GlobalForm,
    OrderedSimplex,
    build_complex,
    ext_full,
    ext_local,
    geometric_decompose,
    global_basis,
    global_dimension,
    global_extend,
    global_trace,
    inclusion,
    load_mesh,
    reassemble,
    trace,
    verify_decomposition,
    verify_extension_axioms,
)
from feec.spaces import SpaceId


def hat(c, vertex):
    """piecewise linear hat function of a global vertex"""
    per_cell = {}
    for T in c.cells:
        if vertex in T.vertices:
            per_cell[T] = lam(T.vertices.index(vertex), c.n)
    return GlobalForm(SpaceId("P", 1, 0, c.n), c, per_cell)


def test_ordered_simplex():
    T = OrderedSimplex((0, 2, 5))
    assert T.dim == 2
    assert str(T) == "[0,2,5]"
    assert len(T.faces()) == 7
    assert T.faces(1) == [OrderedSimplex((0, 2)), OrderedSimplex((0, 5)), OrderedSimplex((2, 5))]
    assert OrderedSimplex((2,)).is_face_of(T)
    assert T.intersection(OrderedSimplex((1, 3))) is None
    with pytest.raises(Malformed):
        OrderedSimplex((2, 1))
    with pytest.raises(Malformed):
        OrderedSimplex(())


def test_inclusion():
    imap = inclusion((1, 3), (0, 1, 2, 3))
    assert imap.slots == (1, 3)
    assert imap(1) == 3
    assert imap.dagger(3) == 1
    assert imap.dagger(2) is None
    assert imap.entries.image == (1, 3)
    with pytest.raises(NotAFace):
        inclusion((1, 4), (0, 1, 2, 3))


def test_trace():
    assert trace(dlam(2, 2), (1, 2), (0, 1, 2)) == dlam(1, 1)
    assert trace(lam(0, 2), (1, 2), (0, 1, 2)).is_zero()
    assert trace(lam(1, 2), (5, 7), (3, 5, 7)) == lam(0, 1)
    with pytest.raises(ShapeMismatch):
        trace(lam(0, 1), (0,), (0, 1, 2))


@pytest.mark.parametrize(
    "cells, counts",
    [
        ([[0, 1, 2], [1, 2, 3]], [4, 5, 2]),
        ([[0, 1, 2, 3]], [4, 6, 4, 1]),
        ([[0, 1, 2], [3, 4, 5]], [6, 6, 2]),
        ([[0, 1], [1, 2], [2, 3]], [4, 3]),
    ],
)
def test_build_complex_counts(cells, counts):
    assert build_complex(cells).counts() == counts


def test_build_complex_errors():
    with pytest.raises(NonUniformDimension):
        build_complex([[0, 1, 2], [2, 3]])
    with pytest.raises(NonUniformDimension):
        build_complex([])
    with pytest.raises(Malformed):
        build_complex([[0, 1, 2], [0, 1, 2]])
    with pytest.raises(Malformed):
        build_complex([[0, 2, 1]])


def test_complex_faces(two_triangles):
    assert two_triangles.n == 2
    assert [str(F) for F in two_triangles.shared_faces()] == ["[1]", "[2]", "[1,2]"]
    assert len(two_triangles.cells_containing((1, 2))) == 2
    assert (0, 3) not in two_triangles
    with pytest.raises(FaceNotInComplex):
        two_triangles.cells_containing((0, 3))


def test_load_mesh(mesh_file):
    c = load_mesh(mesh_file(json.dumps({"cells": [[0, 1, 2], [1, 2, 3]]})))
    assert c.counts() == [4, 5, 2]


@pytest.mark.parametrize(
    "text", ["not json", '{"faces": []}', "[1, 2]", '{"cells": [[1, 0]]}']
)
def test_load_mesh_malformed(mesh_file, text):
    with pytest.raises(Malformed):
        load_mesh(mesh_file(text))


def test_ext_local():
    s = SpaceId("P", 2, 1, 1)
    bubble = make_term((1, 1), (1,), 1)
    extended = ext_local(s, (0, 1), (0, 1, 2), bubble)
    assert extended == make_term((1, 1, 0), (1,), 2)
    assert trace(extended, (0, 1), (0, 1, 2)) == bubble
    assert trace(extended, (1, 2), (0, 1, 2)).is_zero()


def test_ext_local_unsupported():
    with pytest.raises(Unsupported):
        ext_local(SpaceId("P", 0, 0, 1), (0,), (0, 1), one(0))


def test_ext_full_of_a_vertex_value():
    s = SpaceId("P", 1, 0, 1)
    extended = ext_full(s, (0, 1), (0, 1, 2), lam(0, 1))
    assert extended == lam(0, 2)
    assert ext_full(s, (0, 1, 2), (0, 1, 2), lam(2, 2)) == lam(2, 2)


@pytest.mark.parametrize(
    "s",
    [
        SpaceId("P", 1, 0, 2),
        SpaceId("P", 2, 1, 2),
        SpaceId("Pminus", 1, 1, 2),
        SpaceId("Pminus", 2, 1, 2),
        SpaceId("Pminus", 2, 2, 2),
        SpaceId("P", 3, 0, 1),
    ],
)
def test_verify_extension_axioms(s):
    report = verify_extension_axioms(s)
    assert report.passed, report.failures[:5]
    assert report.coverage()["right-inverse"] > 0


@pytest.mark.slow
@pytest.mark.parametrize("family", ["P", "Pminus"])
@pytest.mark.parametrize("k", range(4))
def test_verify_extension_axioms_tetrahedron(family, k):
    report = verify_extension_axioms(SpaceId(family, 2, k, 3))
    assert report.passed, report.failures[:5]


def test_global_forms(two_triangles):
    s = SpaceId("P", 1, 0, 2)
    constant = GlobalForm(s, two_triangles, {T: one(2) for T in two_triangles.cells})
    assert not constant.is_zero()
    h = hat(two_triangles, 1)
    assert global_trace(two_triangles, h, (1, 2), check=True) == lam(0, 1)
    assert (h - h).is_zero()
    assert 2 * h == h + h


def test_global_form_not_single_valued(two_triangles):
    first = two_triangles.cells[0]
    with pytest.raises(NotSingleValued):
        GlobalForm(SpaceId("P", 1, 0, 2), two_triangles, {first: lam(1, 2)})


def test_global_trace_checks_by_default(two_triangles):
    first, second = two_triangles.cells
    s = SpaceId("P", 1, 0, 2)
    # λ_1 on one side of the shared edge, nothing on the other
    g = GlobalForm._trusted(s, two_triangles, {first: lam(1, 2), second: lam(0, 2) * 0})
    with pytest.raises(NotSingleValued):
        global_trace(two_triangles, g, (1, 2))
    assert global_trace(two_triangles, g, (1, 2), check=False) == lam(0, 1)


def test_global_form_unknown_cell(two_triangles):
    with pytest.raises(FaceNotInComplex):
        GlobalForm(SpaceId("P", 1, 0, 2), two_triangles, {(0, 1, 3): lam(1, 2)})


def test_global_extend_hat(two_triangles):
    s = SpaceId("P", 1, 0, 2)
    assert global_extend(s, two_triangles, (1,), one(0)) == hat(two_triangles, 1)
    with pytest.raises(FaceNotInComplex):
        global_extend(s, two_triangles, (0, 3), lam(0, 1))


def test_global_extend_bubble_is_local(two_triangles):
    s = SpaceId("P", 3, 0, 2)
    bubble = make_term((1, 1, 1), (), 2)
    g = global_extend(s, two_triangles, (0, 1, 2), bubble)
    assert g[(0, 1, 2)] == bubble
    assert g[(1, 2, 3)].is_zero()


def test_geometric_decompose_hat(two_triangles):
    s = SpaceId("P", 1, 0, 2)
    pieces = geometric_decompose(s, two_triangles, hat(two_triangles, 1))
    assert pieces[OrderedSimplex((1,))] == lam(0, 0)
    assert all(piece.is_zero() for F, piece in pieces.items() if F != OrderedSimplex((1,)))
    assert reassemble(s, two_triangles, pieces) == hat(two_triangles, 1)


def test_geometric_decompose_edge_form(two_triangles):
    s = SpaceId("Pminus", 1, 1, 2)
    columns = global_basis(s, two_triangles)
    face, _, g = columns[2]
    pieces = geometric_decompose(s, two_triangles, g)
    assert [F for F, piece in pieces.items() if piece] == [face]


@pytest.mark.parametrize(
    "s, dim",
    [
        (SpaceId("P", 1, 0, 2), 4),
        (SpaceId("Pminus", 1, 1, 2), 5),
        (SpaceId("Pminus", 1, 2, 2), 2),
        (SpaceId("P", 1, 1, 2), 10),
        (SpaceId("P", 2, 0, 2), 9),
    ],
)
def test_global_dimension(two_triangles, s, dim):
    assert global_dimension(s, two_triangles) == dim
    assert len(global_basis(s, two_triangles)) == dim


@pytest.mark.parametrize("family", ["P", "Pminus"])
@pytest.mark.parametrize("r", [1, 2])
def test_global_basis_size_matches_constraints(tetrahedron, family, r):
    for k in range(4):
        s = SpaceId(family, r, k, 3)
        assert len(global_basis(s, tetrahedron)) == global_dimension(s, tetrahedron)


def test_global_spaces_need_positive_degree(two_triangles):
    s = SpaceId("P", 0, 0, 2)
    with pytest.raises(Unsupported):
        global_basis(s, two_triangles)
    with pytest.raises(Unsupported):
        global_dimension(s, two_triangles)
    with pytest.raises(Unsupported):
        geometric_decompose(s, two_triangles, None)


@pytest.mark.parametrize(
    "s", [SpaceId("P", 1, 0, 2), SpaceId("Pminus", 1, 1, 2), SpaceId("P", 2, 1, 2)]
)
def test_verify_decomposition(two_triangles, s):
    report = verify_decomposition(s, two_triangles, samples=3, seed=1)
    assert report.passed, report.failures[:5]
    assert report.coverage() == {"decompose-reassemble": 3, "reassemble-decompose": 3}


@pytest.mark.slow
@pytest.mark.parametrize("family", ["P", "Pminus"])
def test_verify_decomposition_tetrahedron(tetrahedron, family):
    for k in range(4):
        report = verify_decomposition(SpaceId(family, 2, k, 3), tetrahedron, samples=5)
        assert report.passed, report.failures[:5]
