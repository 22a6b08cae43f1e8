"""The subdivision scheme: barycentric once, then repeated 4-to-1 splits.

After ``k >= 1`` rounds a 2-simplex becomes a regular hexagon of side
``s = 2**(k-1)`` cut into ``6 * 4**(k-1)`` unit triangles of the triangular
lattice.  Lattice points use axial coordinates ``(a, b)``; the closed hexagon
is ``max(|a|, |b|, |a+b|) <= s``.

Corner layout for a base triangle with sorted vertices ``u0 < u1 < u2``::

    corner j = s * DIRECTIONS[j]
    u0 -> corner 0, u1 -> corner 2, u2 -> corner 4
    corners 1, 3, 5 are the barycentric midpoints of (u0,u1), (u1,u2), (u0,u2)

Each base edge owns a 1-D chart ``t = 0..2**k`` from its lower to its higher
vertex.  A lattice point on the hexagon boundary is owned by the lowest
dimensional base simplex containing it, so shared faces get one global id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .complex import FVector, Simplex, SimplicialComplex2, f_vector

# counter-clockwise; consecutive pairs span the six triangles around a point
DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def side_length(k: int) -> int:
    if k < 1:
        raise ValueError("k must be >= 1")
    return 1 << (k - 1)


def hex_norm(a: int, b: int) -> int:
    return max(abs(a), abs(b), abs(a + b))


@dataclass(frozen=True)
class HexLattice:
    """Cells of the closed side-``s`` lattice hexagon, in sorted order."""

    s: int
    points: tuple
    edges: tuple
    triangles: tuple

    def is_boundary_point(self, p) -> bool:
        return hex_norm(*p) == self.s


@lru_cache(maxsize=None)
def hex_lattice(s: int) -> HexLattice:
    pts = sorted((a, b) for a in range(-s, s + 1) for b in range(-s, s + 1)
                 if hex_norm(a, b) <= s)
    inside = set(pts)
    edges = []
    tris = []
    for a, b in pts:
        for da, db in ((1, 0), (0, 1), (-1, 1)):
            q = (a + da, b + db)
            if q in inside:
                edges.append(tuple(sorted(((a, b), q))))
    # a triangle's anchor corner may sit outside the hexagon
    for a in range(-s - 1, s + 1):
        for b in range(-s - 1, s + 1):
            up = ((a, b), (a + 1, b), (a, b + 1))
            down = ((a + 1, b), (a, b + 1), (a + 1, b + 1))
            for t in (up, down):
                if all(x in inside for x in t):
                    tris.append(tuple(sorted(t)))
    return HexLattice(s, tuple(pts), tuple(sorted(edges)), tuple(sorted(tris)))


def _boundary_path(s: int, j0: int, j1: int, j2: int):
    """Lattice points from corner j0 through corner j1 to corner j2, by t."""
    c = [(s * da, s * db) for da, db in DIRECTIONS]
    out = []
    for t in range(2 * s + 1):
        if t <= s:
            (xa, xb), (ya, yb), u = c[j0], c[j1], t
        else:
            (xa, xb), (ya, yb), u = c[j1], c[j2], t - s
        out.append((xa + (ya - xa) * u // s, xb + (yb - xb) * u // s))
    return out


# base edge (by position in sorted triangle) -> corner path
_EDGE_PATHS = {(0, 1): (0, 1, 2), (1, 2): (2, 3, 4), (0, 2): (0, 5, 4)}


@dataclass(frozen=True)
class SubdividedComplex:
    """``k``-th subdivision of ``base`` with lattice charts.

    ``charts`` maps ``(base_simplex, coord)`` to global vertex ids where
    ``coord`` is ``()`` for base vertices, ``t`` for edges and ``(a, b)`` for
    triangles.  Every point of every chart is present (boundary points
    included), so chart lookups agree across shared faces.
    """

    k: int
    base: SimplicialComplex2
    complex: SimplicialComplex2
    charts: dict = field(default_factory=dict, compare=False, repr=False)

    def vertex(self, chart: Simplex, coord) -> int:
        return self.charts[(chart, coord)]

    def coordinates(self, gid: int) -> list:
        """All chart coordinates naming ``gid``."""
        return [key for key, g in self.charts.items() if g == gid]


def subdivide_k(base: SimplicialComplex2, k: int) -> SubdividedComplex:
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        charts = {((v,), ()): v for (v,) in base.vertices}
        return SubdividedComplex(0, base, base, charts)
    s = side_length(k)
    pieces = 1 << k
    charts: dict = {}
    next_id = 0

    def new_id():
        nonlocal next_id
        next_id += 1
        return next_id - 1

    for v in base.vertex_ids:
        charts[((v,), ())] = new_id()
    edge_ids: dict[Simplex, list[int]] = {}
    for e in base.sorted_simplices(1):
        ids = [charts[((e[0],), ())]]
        ids += [new_id() for _ in range(pieces - 1)]
        ids.append(charts[((e[1],), ())])
        edge_ids[e] = ids
        for t, g in enumerate(ids):
            charts[(e, t)] = g
    lat = hex_lattice(s)
    simplices: set = set()
    for e, ids in edge_ids.items():
        simplices.update(zip(ids, ids[1:]))
    simplices.update((v,) for v in range(next_id))
    for tri in base.sorted_simplices(2):
        local: dict = {}
        for (i0, i1), path in _EDGE_PATHS.items():
            ids = edge_ids[(tri[i0], tri[i1])]
            for t, p in enumerate(_boundary_path(s, *path)):
                local[p] = ids[t]
        for p in lat.points:
            if p not in local:
                local[p] = new_id()
        for p, g in local.items():
            charts[(tri, p)] = g
        for p, q in lat.edges:
            simplices.add(tuple(sorted((local[p], local[q]))))
        for t in lat.triangles:
            simplices.add(tuple(sorted(local[x] for x in t)))
    sub = SimplicialComplex2.from_simplices(simplices)
    return SubdividedComplex(k, base, sub, charts)


def fvector_subdivided(base: SimplicialComplex2 | FVector, k: int) -> FVector:
    """Closed-form f-vector of the ``k``-th subdivision (``k >= 1``)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    f0, f1, f2 = base if isinstance(base, FVector) else f_vector(base)
    p, h = 4 ** (k - 1), 2 ** (k - 1)
    return FVector(
        f0 + (2 ** k - 1) * f1 + (3 * p - 3 * h + 1) * f2,
        2 ** k * f1 + (9 * p - 3 * h) * f2,
        6 * p * f2,
    )


def v_k_fvector(k: int) -> FVector:
    """Closed-form f-vector of the open interior of a subdivided triangle."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p, h = 4 ** (k - 1), 2 ** (k - 1)
    return FVector(3 * p - 3 * h + 1, 9 * p - 3 * h, 6 * p)


@dataclass(frozen=True)
class OpenComplex:
    """A set of open cells of some subdivided triangle (not closed under faces)."""

    k: int
    vertices: frozenset
    edges: frozenset
    triangles: frozenset

    def f_vector(self) -> FVector:
        return FVector(len(self.vertices), len(self.edges), len(self.triangles))

    def cells(self, d: int) -> frozenset:
        return (self.vertices, self.edges, self.triangles)[d]


def interior_of(sub: SubdividedComplex, t) -> OpenComplex:
    """Open cells of ``sub`` strictly inside base triangle ``t``."""
    t = tuple(sorted(t))
    if len(t) != 3 or t not in sub.base.triangles:
        raise ValueError(f"{t} is not a triangle of the base complex")
    if sub.k < 1:
        return OpenComplex(0, frozenset(), frozenset(), frozenset([t]))
    lat = hex_lattice(side_length(sub.k))
    g = {p: sub.charts[(t, p)] for p in lat.points}
    tri_count: dict = {}
    for tri in lat.triangles:
        for e in combinations(tri, 2):
            tri_count[e] = tri_count.get(e, 0) + 1
    verts = frozenset((g[p],) for p in lat.points if not lat.is_boundary_point(p))
    edges = frozenset(tuple(sorted((g[p], g[q]))) for (p, q) in lat.edges
                      if tri_count[(p, q)] == 2)
    tris = frozenset(tuple(sorted(g[x] for x in tri)) for tri in lat.triangles)
    return OpenComplex(sub.k, verts, edges, tris)


STANDARD_TRIANGLE = SimplicialComplex2.from_simplices([(0, 1, 2)])


@lru_cache(maxsize=None)
def subdivided_triangle(k: int) -> SubdividedComplex:
    return subdivide_k(STANDARD_TRIANGLE, k)


def v_k_open(k: int) -> OpenComplex:
    if k < 1:
        raise ValueError("k must be >= 1")
    return interior_of(subdivided_triangle(k), (0, 1, 2))
