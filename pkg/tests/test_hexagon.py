import math
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stoch2c.hexagon import (Hexagon, HexagonError, add_row, enumerate_hexagons, hexagon_fvector,
                             isoperimetric_check, shift_longest_side_inward)
from stoch2c.subdivision import hex_lattice, side_length

SQ3 = math.sqrt(3)


def _xy(p):
    a, b = p
    return (a + b / 2, b * SQ3 / 2)


def _strictly_inside(poly, q, eps=1e-9):
    # counter-clockwise convex polygon, zero-length sides dropped
    pts = [p for i, p in enumerate(poly) if p != poly[i - 1]]
    for i in range(len(pts)):
        (x1, y1), (x2, y2) = pts[i], pts[(i + 1) % len(pts)]
        if (x2 - x1) * (q[1] - y1) - (y2 - y1) * (q[0] - x1) <= eps:
            return False
    return True


def geometric_counts(h: Hexagon):
    """Oracle: cells whose barycentre is strictly inside the polygon."""
    poly = [_xy(v) for v in h.vertices()]
    lat = hex_lattice(side_length(h.k))
    out = []
    for cells in (tuple((p,) for p in lat.points), lat.edges, lat.triangles):
        n = 0
        for c in cells:
            pts = [_xy(p) for p in c]
            q = (sum(x for x, _ in pts) / len(pts), sum(y for _, y in pts) / len(pts))
            n += _strictly_inside(poly, q)
        out.append(n)
    return tuple(out)


def test_regular_hexagons():
    for k in (1, 2, 3):
        s = side_length(k)
        for side in range(1, s + 1):
            f0, f1, f2, b = hexagon_fvector(Hexagon.regular(k, side))
            assert (f2, b) == (6 * side * side, 6 * side)
            assert f0 == 3 * side * side - 3 * side + 1
    assert hexagon_fvector(Hexagon.regular(1, 1)) == (1, 6, 6, 6)
    assert hexagon_fvector(Hexagon.full(2))[:3] == (7, 30, 24)


def test_invalid_hexagons():
    with pytest.raises(HexagonError):
        Hexagon(1, (0, 0), (1, 0, 1, 0, 1, 0))  # a single triangle has no interior vertex
    with pytest.raises(HexagonError):
        Hexagon(1, (0, -1), (1, 1, 1, 1, 1, 2))
    with pytest.raises(HexagonError):
        Hexagon.regular(1, 2)
    with pytest.raises(HexagonError):
        Hexagon(1, (0, -1), (1, 1, -1, 1, 1, 1))


def test_vertices_close_up():
    h = Hexagon.regular(3, 2, center=(1, -1))
    assert len(h.vertices()) == 6
    assert h.perimeter == 12


@pytest.mark.parametrize("k", [1, 2, 3])
def test_direct_counts_match_geometry(k):
    for h in enumerate_hexagons(k):
        f0, f1, f2, _ = hexagon_fvector(h)
        assert (f0, f1, f2) == geometric_counts(h)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_identities(k):
    seen = 0
    for h in enumerate_hexagons(k):
        f0, f1, f2, b = hexagon_fvector(h)
        assert b == h.perimeter
        assert 2 * f0 == f2 - b + 2 and 2 * f1 == 3 * f2 - b
        assert f0 - f1 + f2 == 1
        assert isoperimetric_check(h)
        seen += 1
    assert seen > 0


def test_enumeration_is_exhaustive_at_k1():
    # V_1 holds exactly one hexagon with all sides positive: V_1 itself
    assert list(enumerate_hexagons(1)) == [Hexagon.full(1)]


def test_isoperimetric_examples():
    assert isoperimetric_check(Hexagon.regular(1, 1))
    assert 6 <= 36 / (SQ3 * math.pi)
    for s in (1, 2, 4):
        assert isoperimetric_check(Hexagon.regular(3, min(s, 4)))


def test_shift_longest_side_inward():
    inner = Hexagon.regular(2, 1)
    assert shift_longest_side_inward(inner) == inner
    corner = Hexagon.regular(2, 1, center=(1, -1))
    j = corner.longest_side()
    assert corner.side_on_boundary(j)
    moved = shift_longest_side_inward(corner)
    assert moved.sides == corner.sides and not moved.side_on_boundary(j)
    da, db = moved.corner[0] - corner.corner[0], moved.corner[1] - corner.corner[1]
    assert max(abs(da), abs(db), abs(da + db)) == 1
    with pytest.raises(HexagonError):
        shift_longest_side_inward(Hexagon.full(2))


def _delta(h, g):
    return tuple(y - x for x, y in zip(hexagon_fvector(h)[:3], hexagon_fvector(g)[:3]))


def test_add_row_examples():
    h = Hexagon(4, (-3, 0), (4, 2, 2, 4, 2, 2))
    assert h.longest_side() == 0 and h.sides[0] == 4
    g = add_row(h)
    assert _delta(h, g) == (3, 10, 7)
    assert geometric_counts(g) == hexagon_fvector(g)[:3]
    small = Hexagon.regular(2, 1)
    assert _delta(small, add_row(small)) == (0, 1, 1)
    with pytest.raises(HexagonError):
        add_row(Hexagon.full(2))


@lru_cache(maxsize=None)
def _growable(k):
    return [h for h in enumerate_hexagons(k) if not h.side_on_boundary(h.longest_side())]


@settings(max_examples=40)
@given(st.data())
def test_add_row_deltas_property(data):
    h = data.draw(st.sampled_from(_growable(3)))
    t = max(h.sides)
    try:
        g = add_row(h)
    except HexagonError:
        return
    assert _delta(h, g) == (t - 1, 3 * t - 2, 2 * t - 1)
    assert geometric_counts(g) == hexagon_fvector(g)[:3]
