from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stoch2c.complex import (EMPTY, ComplexError, FVector, SimplicialComplex2, all_subcomplexes,
                             euler_characteristic, external_set, f_vector, from_maximal_simplices,
                             full_simplex, is_closed_surface, make_simplex, mu, pure_2_closure,
                             skeleton_1_no_isolated, surface_diagnostics)
from stoch2c.embedding import torus_7
from stoch2c.subdivision import subdivided_triangle

from conftest import complexes

TRI = from_maximal_simplices([(0, 1, 2)])


def test_make_simplex_sorts_and_validates():
    assert make_simplex([2, 0, 1]) == (0, 1, 2)
    for bad in ([], [0, 1, 2, 3], [1, 1], [-1], [0.5]):
        with pytest.raises(ComplexError):
            make_simplex(bad)


@pytest.mark.parametrize("maximal, f", [
    ([(0, 1, 2)], (3, 3, 1)),
    ([], (0, 0, 0)),
    ([(0, 1, 2), (1, 2, 3)], (4, 5, 2)),
])
def test_from_maximal_simplices_examples(maximal, f):
    assert f_vector(from_maximal_simplices(maximal)) == f


def test_from_maximal_simplices_rejects_duplicates_and_junk():
    with pytest.raises(ComplexError):
        from_maximal_simplices([(0, 1), (1, 0)])
    with pytest.raises(ComplexError):
        from_maximal_simplices([(0, 0, 1)])


def test_raw_constructor_requires_closure():
    with pytest.raises(ComplexError):
        SimplicialComplex2(frozenset({(0,)}), frozenset({(0, 1)}), frozenset())


def test_f_vector_examples():
    assert f_vector(full_simplex(3)) == FVector(3, 3, 1)
    assert f_vector(torus_7()) == (7, 21, 14)
    assert f_vector(subdivided_triangle(1).complex) == (7, 12, 6)


def test_mu_examples():
    assert mu(TRI, 2) == 3
    assert mu(subdivided_triangle(1).complex, 2) == Fraction(7, 6)
    assert mu(from_maximal_simplices([(0,), (1,)]), 1) is None
    with pytest.raises(ValueError):
        mu(TRI, 0)


def test_euler_examples():
    assert euler_characteristic(TRI) == 1
    assert euler_characteristic(torus_7()) == 0
    assert euler_characteristic(EMPTY) == 0


def test_external_set_examples():
    assert external_set(EMPTY, 3) == {(0,), (1,), (2,)}
    cycle = from_maximal_simplices([(0, 1), (1, 2), (0, 2)])
    assert external_set(cycle, 3) == {(0, 1, 2)}
    assert external_set(full_simplex(3), 3) == set()
    with pytest.raises(ComplexError):
        external_set(TRI, 2)


def _is_complex(simplices) -> bool:
    try:
        by = [frozenset(s for s in simplices if len(s) == d + 1) for d in range(3)]
        SimplicialComplex2(*by)
    except ComplexError:
        return False
    return True


@pytest.mark.parametrize("n", [3, 4])
def test_external_set_matches_definition_everywhere(n):
    full = list(full_simplex(n))
    for y in all_subcomplexes(full_simplex(n)):
        ys = set(y)
        expected = {s for s in full if s not in ys and _is_complex(ys | {s})}
        assert external_set(y, n) == expected


def test_subcomplex_counts():
    assert sum(1 for _ in all_subcomplexes(full_simplex(3))) == 19
    assert sum(1 for _ in all_subcomplexes(full_simplex(4))) == 166


def test_pure_2_closure_examples():
    with_vertex = from_maximal_simplices([(0, 1, 2), (5,)])
    assert pure_2_closure(with_vertex) == TRI
    assert pure_2_closure(from_maximal_simplices([(0, 1)])) == EMPTY
    two = from_maximal_simplices([(0, 1, 2), (1, 2, 3), (3, 4)])
    assert pure_2_closure(two) == from_maximal_simplices([(0, 1, 2), (1, 2, 3)])


def test_skeleton_examples():
    assert skeleton_1_no_isolated(TRI) == from_maximal_simplices([(0, 1), (1, 2), (0, 2)])
    assert skeleton_1_no_isolated(from_maximal_simplices([(4,)])) == EMPTY
    path = from_maximal_simplices([(0, 1), (1, 2)])
    assert skeleton_1_no_isolated(path) == path


def test_closed_surfaces():
    assert is_closed_surface(torus_7())
    assert is_closed_surface(from_maximal_simplices(list(combinations(range(4), 3))))
    two = from_maximal_simplices([(0, 1, 2), (1, 2, 3)])
    assert not is_closed_surface(two)
    assert any("lies in 1 triangles" in p for p in surface_diagnostics(two))
    # two tetrahedron boundaries sharing a vertex: pinched, link not a cycle
    pinched = from_maximal_simplices(list(combinations(range(4), 3))
                                     + list(combinations([3, 4, 5, 6], 3)))
    assert not is_closed_surface(pinched)


def test_canonical_string():
    c = from_maximal_simplices([(3,), (0, 1, 2)])
    assert c.canonical_string() == "{3} {0,1,2}"
    assert EMPTY.canonical_string() == "{}"


# -- properties -------------------------------------------------------------

@given(complexes())
def test_downward_closed(c):
    for t in c.triangles:
        assert all(e in c.edges for e in combinations(t, 2))
    for e in c.edges:
        assert all((v,) in c.vertices for v in e)


@given(complexes())
def test_closure_is_idempotent(c):
    assert SimplicialComplex2.from_simplices(c) == c
    assert from_maximal_simplices(c.maximal_simplices()) == c


@given(complexes())
def test_reductions_never_increase_mu(c):
    p2 = pure_2_closure(c)
    if mu(c, 2) is not None:
        assert mu(p2, 2) <= mu(c, 2)
    s1 = skeleton_1_no_isolated(c)
    if mu(c, 1) is not None:
        assert mu(s1, 1) <= mu(c, 1)


ratios = st.tuples(st.integers(0, 50), st.integers(1, 50))


@given(ratios, ratios)
def test_mediant_law_adding(xy, ab):
    (x, y), (a, b) = xy, ab
    if Fraction(a, b) > Fraction(x, y):
        assert Fraction(x + a, y + b) > Fraction(x, y)
        assert Fraction(x + a, y + b) < Fraction(a, b)


@given(ratios, ratios)
def test_mediant_law_removing(xy, ab):
    (x, y), (a, b) = xy, ab
    if x >= a and y > b and Fraction(a, b) < Fraction(x, y):
        assert Fraction(x - a, y - b) > Fraction(x, y)
