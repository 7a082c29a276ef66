import json

import numpy as np
import pytest

from radlayer.algebra import (
    DegenerateFormError,
    PresentationError,
    Quiver,
    QuiverPresentation,
    RelationGenerator,
    RelationTerm,
    commutative_x3_y2,
    denormalize_tuple,
    make_local_algebra,
    normalize_tuple,
    presentation_from_json,
    two_vertex_presentation,
    two_vertex_quiver,
)
from radlayer.exactmat import QQ, FieldError, FieldSpec, Matrix, random_invertible
from radlayer.rep import Representation, evaluate_element

F = FieldSpec(32003)


def test_identity_gram_gives_sum_of_squares():
    alg = make_local_algebra(2)
    (S,) = alg.relations
    assert sorted((t.coeff, t.path) for t in S.terms) == [(1, ("x1", "x1")), (1, ("x2", "x2"))]


def test_hyperbolic_gram_accepted():
    alg = make_local_algebra(2, [[0, 1], [1, 0]])
    assert alg.gram.det() == F.scalar(-1)


@pytest.mark.parametrize("gram", [[[1, 1], [1, 1]], [[0, 0], [0, 1]], [[2, 4], [1, 2]]])
def test_degenerate_gram_rejected(gram):
    with pytest.raises(DegenerateFormError):
        make_local_algebra(2, gram)


def test_characteristic_two_rejected():
    with pytest.raises(FieldError):
        make_local_algebra(2, None, 2)


def test_relation_split_at_rightmost_letter():
    alg = make_local_algebra(3, [[1, 2, 0], [0, 1, 0], [5, 0, 1]])
    (S,) = alg.relations
    # S = sum_j (sum_i a_ij x_i) x_j
    by_last = {}
    for t in S.terms:
        by_last.setdefault(t.x, {})[t.g] = t.coeff
    assert by_last["x1"] == {("x1",): 1, ("x3",): 5}
    assert by_last["x2"] == {("x1",): 2, ("x2",): 1}
    assert by_last["x3"] == {("x3",): 1}


def test_normalize_identity_and_swap(rng):
    A = [Matrix.random(F, 3, 2, rng) for _ in range(2)]
    assert normalize_tuple(make_local_algebra(2), A) == tuple(A)
    assert normalize_tuple(make_local_algebra(2, [[0, 1], [1, 0]]), A) == (A[1], A[0])


@pytest.mark.parametrize("field", [F, QQ], ids=str)
def test_normalize_preserves_relation(field, rng):
    """Random Gram matrix; (A, C) solves the S-relation iff (A', C) solves the
    standard one.  C is built from the kernel by direct products only."""
    n, d2, d1, d0 = 3, 2, 3, 2
    for _ in range(5):
        gram = random_invertible(field, n, rng)
        alg = make_local_algebra(n, gram, field)
        A = [Matrix.random(field, d2, d1, rng) for _ in range(n)]
        # sum_ij a_ij A_i C_j as a linear map in the stacked C
        big = np.concatenate(
            [sum((A[i].scale(gram[i, j]) for i in range(n)), Matrix.zeros(field, d2, d1)).array for j in range(n)],
            axis=1,
        )
        K = Matrix(field, big).kernel()
        C = [K.block(j * d1, (j + 1) * d1, 0, min(d0, K.ncols)) for j in range(n)]
        direct = sum(
            ((A[i] @ C[j]).scale(gram[i, j]) for i in range(n) for j in range(n)),
            Matrix.zeros(field, d2, C[0].ncols),
        )
        assert direct.is_zero()
        Ap = normalize_tuple(alg, A)
        assert sum((Ap[i] @ C[i] for i in range(n)), Matrix.zeros(field, d2, C[0].ncols)).is_zero()
        assert denormalize_tuple(alg, Ap) == tuple(A)


def test_normalize_shape_mismatch():
    alg = make_local_algebra(2)
    with pytest.raises(ValueError):
        normalize_tuple(alg, [Matrix.zeros(F, 2, 2), Matrix.zeros(F, 2, 3)])


def test_evaluate_element_basics():
    alg = make_local_algebra(2)
    x1 = Matrix(F, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    x2 = Matrix(F, [[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    rep = Representation.local(alg, [x1, x2])
    assert evaluate_element(rep, [(1, ())]) == Matrix.identity(F, 3)
    assert evaluate_element(rep, [(1, ("x1",))]) == x1
    assert evaluate_element(rep, [(1, ("x1", "x1")), (1, ("x2", "x2"))]).is_zero()
    # product order: ("x1", "x2") is x1 after x2
    assert evaluate_element(rep, [(1, ("x1", "x2"))]) == x1 @ x2
    assert not (x1 @ x2).is_zero()


def test_evaluate_element_is_linear(rng):
    alg = make_local_algebra(2)
    a = [Matrix.random(F, 4, 4, rng) for _ in range(2)]
    rep = Representation.local(alg, a, check=False)
    words = [("x1", "x2"), ("x2",), ("x2", "x2", "x1")]
    coeffs = [3, -7, 11]
    total = evaluate_element(rep, list(zip(coeffs, words)))
    parts = sum((evaluate_element(rep, [(c, w)]) for c, w in zip(coeffs, words)), Matrix.zeros(F, 4, 4))
    assert total == parts
    assert evaluate_element(rep, [(1, ("x1", "x2", "x2"))]) == a[0] @ a[1] @ a[1]


def test_quiver_paths_and_composability():
    q = two_vertex_quiver()
    assert q.path_ends(("b", "a")) == ("2", "2")
    assert q.path_ends(("b", "c", "c")) == ("1", "2")
    with pytest.raises(PresentationError):
        q.path_ends(("a", "a"))
    assert len(q.paths_of_length(2)) == 5
    assert set(q.paths_of_length(2)) == {("a", "b"), ("b", "a"), ("b", "c"), ("c", "c"), ("c", "a")}


def test_relation_validation():
    q = two_vertex_quiver()
    with pytest.raises(PresentationError):
        QuiverPresentation(q, (RelationGenerator((RelationTerm(1, (), "a"),)),), 4)
    bad = RelationGenerator((RelationTerm(1, ("a",), "b"), RelationTerm(1, ("b",), "a")))
    with pytest.raises(PresentationError):
        QuiverPresentation(q, (bad,), 4)


@pytest.mark.parametrize("rel", ["ab+c^2", "bc", "bab+bc^2", "ba", "ab+c^2,bc"])
def test_two_vertex_fixtures_are_homogeneous(rel):
    pres = two_vertex_presentation(rel)
    for r in pres.relations:
        r.ends(pres.quiver)


def test_unknown_fixture_relation():
    with pytest.raises(PresentationError):
        two_vertex_presentation("abc")


@pytest.mark.parametrize(
    "pres",
    [
        make_local_algebra(2),
        make_local_algebra(3, [[0, 1, 0], [1, 0, 0], [0, 0, 2]], QQ),
        two_vertex_presentation("bab+bc^2"),
        commutative_x3_y2(FieldSpec(101)),
    ],
    ids=["local2", "local3-Q", "two-vertex", "x3y2"],
)
def test_presentation_json_roundtrip(pres):
    text = json.dumps(pres.to_json())
    assert presentation_from_json(json.loads(text)) == pres


def test_presentation_json_documented_forms():
    local = presentation_from_json({"kind": "local", "n": 2, "gram": [[1, 0], [0, 1]], "field": {"p": 32003}})
    assert local == make_local_algebra(2)
    quiver = presentation_from_json(
        {
            "kind": "quiver",
            "vertices": ["1", "2"],
            "arrows": [{"id": "a", "source": "2", "target": "1"}, ["b", "1", "2"], ["c", "1", "1"]],
            "relations": [{"terms": [{"c": 1, "g": ["b", "a"], "x": "b"}, {"c": 1, "g": ["b", "c"], "x": "c"}]}],
            "m": 4,
        }
    )
    assert quiver.quiver == two_vertex_quiver()
    assert len(quiver.relations[0].terms) == 2


def test_quiver_rejects_unknown_vertices():
    with pytest.raises(PresentationError):
        Quiver.build(["1"], [("a", "1", "2")])
