"""Closed 2-dimensional simplicial complexes over integer vertex ids.

Simplices are plain sorted tuples of 1 to 3 distinct non-negative ints.
A :class:`SimplicialComplex2` stores one frozenset per dimension and is
downward closed by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Sequence

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Malformed simplex or complex input."""


def make_simplex(vertices: Iterable[int]) -> Simplex:
    """Validate and sort a vertex collection into a simplex tuple."""
    vs = tuple(sorted(vertices))
    if not 1 <= len(vs) <= 3:
        raise ComplexError(f"simplex must have 1-3 vertices, got {vs!r}")
    if any((not isinstance(v, int)) or isinstance(v, bool) or v < 0 for v in vs):
        raise ComplexError(f"vertex ids must be non-negative ints: {vs!r}")
    if len(set(vs)) != len(vs):
        raise ComplexError(f"repeated vertex in simplex {vs!r}")
    return vs


def dim(s: Simplex) -> int:
    return len(s) - 1


def faces(s: Simplex) -> Iterator[Simplex]:
    """Proper nonempty faces of ``s``."""
    for r in range(1, len(s)):
        yield from combinations(s, r)


def boundary(s: Simplex) -> list[Simplex]:
    """Codimension-one faces; empty for a vertex."""
    if len(s) == 1:
        return []
    return list(combinations(s, len(s) - 1))


class FVector(NamedTuple):
    f0: int
    f1: int
    f2: int


@dataclass(frozen=True)
class SimplicialComplex2:
    """An immutable, downward-closed complex of dimension at most 2.

    Use :func:`from_maximal_simplices` (or :meth:`from_simplices`) to build
    one; the raw constructor validates closure but does not close.
    """

    vertices: frozenset = frozenset()
    edges: frozenset = frozenset()
    triangles: frozenset = frozenset()

    def __post_init__(self):
        for e in self.edges:
            for v in e:
                if (v,) not in self.vertices:
                    raise ComplexError(f"edge {e} has missing vertex {v}")
        for t in self.triangles:
            for e in combinations(t, 2):
                if e not in self.edges:
                    raise ComplexError(f"triangle {t} has missing edge {e}")

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex2":
        """Downward closure of an arbitrary simplex collection (duplicates allowed)."""
        by_dim: list[set] = [set(), set(), set()]
        for raw in simplices:
            s = make_simplex(raw)
            by_dim[len(s) - 1].add(s)
            for f in faces(s):
                by_dim[len(f) - 1].add(f)
        return cls(frozenset(by_dim[0]), frozenset(by_dim[1]), frozenset(by_dim[2]))

    def __eq__(self, other) -> bool:
        # structural, so certified subclasses compare equal to plain complexes
        if not isinstance(other, SimplicialComplex2):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.triangles == other.triangles)

    # -- views -----------------------------------------------------------

    def simplices(self, d: int) -> frozenset:
        return (self.vertices, self.edges, self.triangles)[d]

    def sorted_simplices(self, d: int) -> list[Simplex]:
        return sorted(self.simplices(d))

    def __iter__(self) -> Iterator[Simplex]:
        for d in range(3):
            yield from self.sorted_simplices(d)

    def __contains__(self, s) -> bool:
        s = tuple(sorted(s))
        if not 1 <= len(s) <= 3:
            return False
        return s in self.simplices(len(s) - 1)

    def __len__(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.triangles)

    def __le__(self, other: "SimplicialComplex2") -> bool:
        return (self.vertices <= other.vertices and self.edges <= other.edges
                and self.triangles <= other.triangles)

    def __lt__(self, other: "SimplicialComplex2") -> bool:
        return self <= other and self != other

    def union(self, other: "SimplicialComplex2") -> "SimplicialComplex2":
        return SimplicialComplex2(self.vertices | other.vertices,
                                  self.edges | other.edges,
                                  self.triangles | other.triangles)

    @property
    def vertex_ids(self) -> list[int]:
        return sorted(v for (v,) in self.vertices)

    @property
    def dimension(self) -> int:
        """-1 for the empty complex."""
        for d in (2, 1, 0):
            if self.simplices(d):
                return d
        return -1

    def maximal_simplices(self) -> list[Simplex]:
        covered = set()
        for t in self.triangles:
            covered.update(faces(t))
        for e in self.edges:
            covered.update(faces(e))
        out = [s for s in self if s not in covered]
        return sorted(out, key=lambda s: (len(s), s))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def canonical_string(self) -> str:
        """One-line canonical form, e.g. ``{0,1,2} {3}``; ``{}`` when empty."""
        ms = self.maximal_simplices()
        if not ms:
            return "{}"
        return " ".join("{" + ",".join(map(str, s)) + "}" for s in ms)

    def __repr__(self) -> str:
        return f"SimplicialComplex2({self.canonical_string()})"


def from_maximal_simplices(simplices: Sequence[Iterable[int]]) -> SimplicialComplex2:
    """Downward closure of a list of simplices.

    Duplicate entries are rejected, as are malformed ones.
    """
    seen = set()
    for raw in simplices:
        s = make_simplex(raw)
        if s in seen:
            raise ComplexError(f"duplicate simplex {s}")
        seen.add(s)
    return SimplicialComplex2.from_simplices(seen)


EMPTY = SimplicialComplex2()


def full_simplex(n: int) -> SimplicialComplex2:
    """The full 2-skeleton on vertices ``0..n-1``."""
    return SimplicialComplex2(
        frozenset((v,) for v in range(n)),
        frozenset(combinations(range(n), 2)),
        frozenset(combinations(range(n), 3)),
    )


def f_vector(c: SimplicialComplex2) -> FVector:
    return FVector(len(c.vertices), len(c.edges), len(c.triangles))


def mu(c: SimplicialComplex2, i: int) -> Fraction | None:
    """Exact ``f0/f_i``; None when ``f_i == 0`` (the ratio is undefined)."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    f = f_vector(c)
    if f[i] == 0:
        return None
    return Fraction(f.f0, f[i])


def euler_characteristic(c: SimplicialComplex2) -> int:
    f = f_vector(c)
    return f.f0 - f.f1 + f.f2


def external_set(y: SimplicialComplex2, n: int) -> set[Simplex]:
    """Simplices of the full complex on ``n`` vertices that are missing
    from ``y`` while their whole boundary is present."""
    bad = [v for v in y.vertex_ids if v >= n]
    if bad:
        raise ComplexError(f"vertex ids {bad} not below n={n}")
    present = y.vertex_ids
    out: set[Simplex] = {(v,) for v in range(n) if (v,) not in y.vertices}
    for e in combinations(present, 2):
        if e not in y.edges:
            out.add(e)
    adj: dict[int, set[int]] = {}
    for a, b in y.edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    for a, b in y.edges:
        for c in adj[a] & adj[b]:
            if c > b:
                t = (a, b, c)
                if t not in y.triangles:
                    out.add(t)
    return out


def pure_2_closure(t: SimplicialComplex2) -> SimplicialComplex2:
    """Union of the closed 2-simplices of ``t``."""
    return SimplicialComplex2.from_simplices(t.triangles)


def skeleton_1_no_isolated(t: SimplicialComplex2) -> SimplicialComplex2:
    """1-skeleton of ``t`` with isolated vertices dropped."""
    return SimplicialComplex2.from_simplices(t.edges)


def vertex_link(c: SimplicialComplex2, v: int) -> list[tuple[int, int]]:
    """Edges of the link of ``v``: the opposite edge of each triangle at ``v``."""
    return sorted(tuple(x for x in t if x != v) for t in c.triangles if v in t)


def _components(nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> int:
    parent = {v: v for v in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in parent})


def surface_diagnostics(c: SimplicialComplex2) -> list[str]:
    """Reasons ``c`` fails to be a connected closed surface (empty if it is one)."""
    problems = []
    if not c.triangles:
        return ["no 2-simplices"]
    edge_count: dict[Simplex, int] = {e: 0 for e in c.edges}
    in_triangle = set()
    for t in c.triangles:
        for e in combinations(t, 2):
            edge_count[e] += 1
        in_triangle.update(t)
    for (v,) in sorted(c.vertices):
        if v not in in_triangle:
            problems.append(f"vertex {v} lies in no triangle")
    for e, k in sorted(edge_count.items()):
        if k != 2:
            problems.append(f"edge {e} lies in {k} triangles")
    for v in sorted(in_triangle):
        link = vertex_link(c, v)
        deg: dict[int, int] = {}
        for a, b in link:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        if any(d != 2 for d in deg.values()) or _components(deg, link) != 1:
            problems.append(f"link of vertex {v} is not a single cycle")
    if _components(c.vertex_ids, c.edges) != 1:
        problems.append("complex is not connected")
    return problems


def is_closed_surface(c: SimplicialComplex2) -> bool:
    return not surface_diagnostics(c)


def all_subcomplexes(c: SimplicialComplex2) -> Iterator[SimplicialComplex2]:
    """Every subcomplex of ``c`` (the empty one included), by plain recursion.

    Exponential; meant as a brute-force reference for small inputs.
    """
    verts = c.sorted_simplices(0)
    edges = c.sorted_simplices(1)
    tris = c.sorted_simplices(2)
    for r in range(len(verts) + 1):
        for vsub in combinations(verts, r):
            vset = frozenset(vsub)
            allowed_e = [e for e in edges if (e[0],) in vset and (e[1],) in vset]
            for re in range(len(allowed_e) + 1):
                for esub in combinations(allowed_e, re):
                    eset = frozenset(esub)
                    allowed_t = [t for t in tris
                                 if all(f in eset for f in combinations(t, 2))]
                    for rt in range(len(allowed_t) + 1):
                        for tsub in combinations(allowed_t, rt):
                            yield SimplicialComplex2(vset, eset, frozenset(tsub))
