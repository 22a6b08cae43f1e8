from fractions import Fraction
from itertools import combinations

import pytest

from stoch2c.complex import (FVector, euler_characteristic, f_vector, from_maximal_simplices,
                             is_closed_surface)
from stoch2c.embedding import torus_7
from stoch2c.subdivision import (STANDARD_TRIANGLE, fvector_subdivided, hex_lattice, interior_of,
                                 side_length, subdivide_k, subdivided_triangle, v_k_fvector,
                                 v_k_open)

EDGE = from_maximal_simplices([(0, 1)])
TWO = from_maximal_simplices([(0, 1, 2), (1, 2, 3)])
TETRA = from_maximal_simplices(list(combinations(range(4), 3)))
BASES = [STANDARD_TRIANGLE, TWO, TETRA, torus_7(), EDGE]


def test_lattice_counts():
    for s in (1, 2, 4):
        lat = hex_lattice(s)
        assert len(lat.triangles) == 6 * s * s
        assert len(lat.points) == 3 * s * s + 3 * s + 1
    assert side_length(1) == 1 and side_length(4) == 8
    with pytest.raises(ValueError):
        side_length(0)


def test_subdivided_triangle_examples():
    assert f_vector(subdivide_k(STANDARD_TRIANGLE, 1).complex) == (7, 12, 6)
    sub2 = subdivide_k(STANDARD_TRIANGLE, 2)
    assert f_vector(sub2.complex).f2 == 24
    assert interior_of(sub2, (0, 1, 2)).f_vector() == (7, 30, 24)
    for base in BASES:
        assert subdivide_k(base, 0).complex == base


@pytest.mark.parametrize("base", BASES, ids=["triangle", "two", "tetra", "torus", "edge"])
def test_closed_form_matches_construction(base):
    for k in range(1, 5):
        assert f_vector(subdivide_k(base, k).complex) == fvector_subdivided(base, k)


def test_closed_form_examples():
    assert fvector_subdivided(STANDARD_TRIANGLE, 1) == (7, 12, 6)
    assert fvector_subdivided(torus_7(), 1).f2 == 84
    assert fvector_subdivided(EDGE, 3) == (9, 8, 0)
    assert fvector_subdivided(FVector(3, 3, 1), 2) == (19, 42, 24)
    with pytest.raises(ValueError):
        fvector_subdivided(EDGE, 0)


def test_v_k_examples():
    assert v_k_fvector(1) == (1, 6, 6)
    assert v_k_fvector(2) == (7, 30, 24)
    assert v_k_fvector(3) == (37, 132, 96)
    for k in range(1, 6):
        assert v_k_open(k).f_vector() == v_k_fvector(k)
    with pytest.raises(ValueError):
        v_k_open(0)


def test_v_k_recursions():
    for k in range(1, 13):
        f, g = v_k_fvector(k), v_k_fvector(k + 1)
        assert g == (f.f0 + f.f1, 2 * f.f1 + 3 * f.f2, 4 * f.f2)


def test_v_k_limits():
    f = v_k_fvector(10)
    assert Fraction(f.f0, f.f1) == Fraction(784897, 2357760)
    assert Fraction(f.f0, f.f2) == Fraction(784897, 1572864)


@pytest.mark.parametrize("base", BASES[:4], ids=["triangle", "two", "tetra", "torus"])
def test_topology_is_preserved(base):
    for k in (1, 2, 3):
        sub = subdivide_k(base, k).complex
        assert euler_characteristic(sub) == euler_characteristic(base)
        assert is_closed_surface(sub) == is_closed_surface(base)


def test_interior_of_every_triangle_is_v_k():
    sub = subdivide_k(TETRA, 2)
    for t in TETRA.triangles:
        assert interior_of(sub, t).f_vector() == (7, 30, 24)
    with pytest.raises(ValueError):
        interior_of(sub, (0, 1))


def test_charts_agree_on_shared_faces():
    k = 3
    sub = subdivide_k(TWO, k)
    pieces = 1 << k
    # shared edge (1, 2): position 0 in (1,2,3), position 1-2 in (0,1,2)
    edge_ids = [sub.vertex((1, 2), t) for t in range(pieces + 1)]
    assert edge_ids[0] == sub.vertex((1,), ()) and edge_ids[-1] == sub.vertex((2,), ())
    assert len(set(edge_ids)) == pieces + 1
    s = side_length(k)
    for tri in ((0, 1, 2), (1, 2, 3)):
        seen = {sub.vertex(tri, p) for p in hex_lattice(s).points}
        assert set(edge_ids) <= seen
    # one global id per point: the total matches the closed form
    assert len(sub.complex.vertices) == fvector_subdivided(TWO, k).f0
    assert sorted(sub.coordinates(sub.vertex((1,), ()))) == sorted(
        [((1,), ()), ((1, 2), 0), ((0, 1), pieces), ((0, 1, 2), (-s, s)),
         ((1, 2, 3), (s, 0)), ((1, 3), 0)])


def test_edge_pieces():
    for k in (1, 2, 3):
        sub = subdivide_k(EDGE, k)
        assert f_vector(sub.complex) == (2 ** k + 1, 2 ** k, 0)


def test_subdivided_triangle_is_cached():
    assert subdivided_triangle(2) is subdivided_triangle(2)
