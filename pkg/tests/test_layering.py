import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radlayer.layering import (
    DecompositionError,
    EmptyStratumError,
    ThetaPair,
    components,
    dominance_comparable,
    dominance_leq,
    dominance_minima,
    exceptional_parameter,
    exhaustive_decompositions,
    fixed_point_check,
    generic_raddim,
    generic_socdim,
    h0_generic,
    h1_generic,
    rad_nonempty,
    root_decompose,
    root_generators,
    roots_table,
    socdim_formula_certified,
    theta_separated,
    tits_q,
    triples,
    violated_inequality,
)
from radlayer.rep import LayeringVector


def test_dominance_examples():
    assert dominance_leq((1, 2, 3), (1, 2, 3))
    assert dominance_leq((1, 1, 1), (1, 2, 0))
    assert not dominance_leq((2, 0, 1), (1, 2, 0))
    assert not dominance_leq((1, 2, 0), (2, 0, 1))
    assert not dominance_comparable((2, 0, 1), (1, 2, 0))


def test_dominance_multi_vertex():
    u = LayeringVector(((1, 0), (0, 1)), ("1", "2"))
    v = LayeringVector(((1, 1), (0, 0)), ("1", "2"))
    assert dominance_leq(u, v) and not dominance_leq(v, u)
    with pytest.raises(ValueError):
        dominance_leq((1, 2), (1, 2, 0))


def _prefix_oracle(u, v):
    return all(sum(u[: k + 1]) <= sum(v[: k + 1]) for k in range(len(u)))


vec3 = st.tuples(*[st.integers(0, 5)] * 3)


@settings(max_examples=300, deadline=None)
@given(u=vec3, v=vec3, w=vec3)
def test_dominance_is_a_partial_order(u, v, w):
    assert dominance_leq(u, u)
    assert dominance_leq(u, v) == _prefix_oracle(u, v)
    if dominance_leq(u, v) and dominance_leq(v, u):
        assert u == v
    if dominance_leq(u, v) and dominance_leq(v, w):
        assert dominance_leq(u, w)


@settings(max_examples=100, deadline=None)
@given(vals=st.lists(vec3, min_size=1, max_size=8))
def test_minima_are_minimal(vals):
    mins = dominance_minima(vals)
    assert mins
    for m in mins:
        assert not any(v != m and dominance_leq(v, m) for v in vals)
    for v in vals:
        assert any(dominance_leq(m, v) for m in mins)


@pytest.mark.parametrize(
    "d, expected",
    [((1, 2, 3), True), ((1, 3, 0), False), ((1, 1, 2), False), ((0, 0, 0), True), ((0, 1, 0), False)],
)
def test_rad_nonempty_examples(d, expected):
    assert rad_nonempty(2, d) is expected


def test_violated_inequality_messages():
    assert violated_inequality(2, (1, 3, 0)) == "d1 ≤ n·d0 violated (3 > 2)"
    assert violated_inequality(2, (1, 1, 2)) == "n·d2 ≤ (n²-1)·d1 violated (4 > 3)"
    assert violated_inequality(2, (1, 2, 3)) is None


@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_tits_form_examples(n):
    assert tits_q(n, 1, n) == 1
    assert tits_q(n, 0, 0) == 0


def test_tits_form_value():
    assert tits_q(3, 2, 5) == -1


def test_generators_are_roots():
    for n in range(2, 6):
        for g in root_generators(n):
            assert tits_q(n, *g) <= 1


@pytest.mark.parametrize(
    "pair, expected",
    [((3, 4), [(1, 1), (2, 3)]), ((5, 7), [(1, 1), (2, 3), (2, 3)]), ((1, 1), [(1, 1)])],
)
def test_root_decompose_examples(pair, expected):
    assert sorted(root_decompose(2, *pair)) == expected
    assert tuple(expected) in exhaustive_decompositions(2, *pair)


def test_root_decompose_rejects_invalid():
    with pytest.raises(DecompositionError):
        root_decompose(2, 1, 2)


@pytest.mark.parametrize("n", [2, 3])
def test_root_decompose_against_exhaustive(n):
    for d1, d2 in itertools.product(range(13), repeat=2):
        valid = n * d2 <= (n * n - 1) * d1
        assert bool(exhaustive_decompositions(n, d1, d2, limit=1)) == valid
        if valid:
            parts = root_decompose(n, d1, d2)
            assert (sum(a for a, _ in parts), sum(b for _, b in parts)) == (d1, d2)
            assert tuple(sorted(parts)) in exhaustive_decompositions(n, d1, d2)


@pytest.mark.parametrize(
    "d, h0, h1",
    [((2, 2, 3), 1, 0), ((1, 2, 2), 0, 0), ((3, 5, 2), 0, 1)],
)
def test_h_generic_examples(d, h0, h1):
    assert (h0_generic(2, d), h1_generic(2, d)) == (h0, h1)


def test_h_generic_empty_stratum():
    with pytest.raises(EmptyStratumError):
        h0_generic(2, (1, 3, 0))


@pytest.mark.parametrize(
    "d, expected",
    [((2, 3, 2), (2, 3, 2)), ((2, 2, 3), (3, 3, 1)), ((3, 3, 1), (2, 2, 3)), ((10, 5, 1), (4, 9, 3)), ((3, 5, 2), (3, 4, 3))],
)
def test_generic_socdim_examples(d, expected):
    assert generic_socdim(2, d) == expected
    assert sum(expected) == sum(d)


def test_generic_raddim_is_dual_formula():
    for d in [(2, 3, 2), (2, 2, 3), (3, 3, 1)]:
        assert generic_raddim(2, generic_socdim(2, d)) == d


def test_formula_certification_flags():
    assert socdim_formula_certified(2, (2, 3, 2))
    assert socdim_formula_certified(2, (2, 2, 3))
    assert socdim_formula_certified(2, (3, 5, 2))
    # h0 > 0 and h1 > 0: the closed form is known not to be generic here
    assert not socdim_formula_certified(2, (10, 5, 1))


@pytest.mark.parametrize(
    "n, d, expected",
    [
        (2, 5, [(1, 2, 2), (2, 2, 1)]),
        (2, 7, [(2, 2, 3), (2, 3, 2), (3, 3, 1)]),
        (2, 1, [(1, 0, 0)]),
    ],
)
def test_components_examples(n, d, expected):
    assert components(n, d).layerings == expected


def test_components_d7_exceptional_marks():
    rep = components(2, 7)
    marks = {e.layering: e.exceptional for e in rep.entries}
    assert marks == {(2, 2, 3): True, (2, 3, 2): False, (3, 3, 1): True}
    assert "(2,2,3)*" in rep.table()


def test_components_d1_reports_excluded_vector():
    rep = components(2, 1)
    assert rep.excluded == [(0, 1, 0)]
    assert rep.notes


def _regular_oracle(n, t):
    d0, d1, d2 = t
    return d1 <= n * d0 and d1 <= n * d2 and d2 <= n * d1 - d0 and d0 <= n * d1 - d2


@pytest.mark.parametrize("n", [2, 3])
def test_components_match_enumeration(n):
    for d in range(1, 16):
        lays = set(components(n, d).layerings)
        regular = {t for t in triples(d) if _regular_oracle(n, t)}
        exc = {t for t in lays if exceptional_parameter(n, t)}
        assert lays == regular | exc
        for t in exc:
            assert (d - 1) % (n * n + n) == 0


@pytest.mark.parametrize("n", [2, 3])
def test_components_pass_fixed_point_check(n):
    for d in range(1, 13):
        for t in components(n, d).layerings:
            assert fixed_point_check(n, t), t


def test_fixed_point_examples():
    assert not fixed_point_check(2, (3, 5, 2))
    assert fixed_point_check(2, (2, 2, 3))


@pytest.mark.parametrize("d", [7, 13])
def test_theta_separation(d):
    assert theta_separated(2, d)


def test_theta_pair_order():
    p = ThetaPair((1, 1, 1), (1, 1, 1))
    q = ThetaPair((1, 2, 0), (1, 1, 1))
    assert p <= q and not q <= p
    with pytest.raises(ValueError):
        ThetaPair((1, 1, 1), (1, 1))


def test_roots_table():
    rows = roots_table(2, 5)
    pts = {(r["d1"], r["d2"]) for r in rows}
    assert all(tits_q(2, a, b) <= 1 for a, b in pts)
    assert {(a, b) for a in range(6) for b in range(6) if a * a + b * b - 2 * a * b <= 1} == pts
    excluded = [r for r in rows if r["is_excluded"]]
    assert [(r["d1"], r["d2"]) for r in excluded] == [(1, 2)]
    gens = {(r["d1"], r["d2"]) for r in rows if r["is_generator"]}
    assert gens == {(1, 0), (1, 1), (2, 3)}
