"""Simplicial embeddings, the 7-vertex torus, and the first-moment bounds.

An embedding of ``S`` into ``Y`` is an injective vertex map sending every
simplex of ``S`` onto a simplex of ``Y``.  Search assigns source vertices in
a fixed order; host candidates for the next vertex are the bitwise AND of
the neighbour sets of its placed neighbours and the "third vertex" sets of
placed edges it closes a triangle with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

from . import _kernel
from .complex import SimplicialComplex2, euler_characteristic, f_vector, from_maximal_simplices, surface_diagnostics

BRUTE_FORCE_LIMIT = 10**7


class SearchBudgetExceeded(RuntimeError):
    """The node budget ran out before the search could decide."""


@dataclass(frozen=True)
class EmbeddingMap:
    assignment: dict

    def __call__(self, v: int) -> int:
        return self.assignment[v]

    def image(self, s) -> tuple[int, ...]:
        return tuple(sorted(self.assignment[v] for v in s))


def is_simplicial_embedding(source: SimplicialComplex2, host: SimplicialComplex2,
                            assignment: dict) -> bool:
    """Independent check: injective on vertices and simplex-preserving."""
    if set(assignment) != set(source.vertex_ids):
        return False
    if len(set(assignment.values())) != len(assignment):
        return False
    return all(tuple(sorted(assignment[v] for v in s)) in host for s in source)


class HostIndex:
    """Bitset view of a host complex: neighbour sets and, per ordered vertex
    pair, the set of vertices completing a triangle.

    Build once with :meth:`from_complex` or :meth:`from_masks` and pass it to
    the search functions in place of the complex.
    """

    def __init__(self, ids, edges: np.ndarray, triangles: np.ndarray):
        # edges / triangles hold local indices into ids
        self.ids = list(ids)
        n = self.n = len(self.ids)
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        self.degree = np.bincount(edges.ravel(), minlength=n).tolist()
        self.tri_count = np.bincount(triangles.ravel(), minlength=n).tolist()
        self.nbr_bits = self.tri_matrix = None
        if n <= 64:
            one = np.uint64(1)
            nbr = np.zeros(n, dtype=np.uint64)
            np.bitwise_or.at(nbr, edges[:, 0], one << edges[:, 1].astype(np.uint64))
            np.bitwise_or.at(nbr, edges[:, 1], one << edges[:, 0].astype(np.uint64))
            mat = np.zeros((n, n), dtype=np.uint64)
            for x, y, z in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
                bits = one << triangles[:, z].astype(np.uint64)
                np.bitwise_or.at(mat, (triangles[:, x], triangles[:, y]), bits)
                np.bitwise_or.at(mat, (triangles[:, y], triangles[:, x]), bits)
            self.nbr_bits, self.tri_matrix = nbr, mat
            self.nbr = [int(x) for x in nbr]
        else:
            self.nbr = [0] * n
            for i, j in edges.tolist():
                self.nbr[i] |= 1 << j
                self.nbr[j] |= 1 << i
        self._triangles = triangles
        self._tri_nbr = None

    @property
    def tri_nbr(self) -> dict[int, int]:
        """``i * n + j`` -> bitset of third vertices, for the Python search."""
        if self._tri_nbr is None:
            n, out = self.n, {}
            for tri in self._triangles.tolist():
                for x, y, z in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
                    i, j, bit = tri[x], tri[y], 1 << tri[z]
                    out[i * n + j] = out.get(i * n + j, 0) | bit
                    out[j * n + i] = out.get(j * n + i, 0) | bit
            self._tri_nbr = out
        return self._tri_nbr

    @classmethod
    def from_complex(cls, y: SimplicialComplex2) -> "HostIndex":
        ids = y.vertex_ids
        index = {v: i for i, v in enumerate(ids)}
        edges = [(index[a], index[b]) for a, b in y.edges]
        tris = [(index[a], index[b], index[c]) for a, b, c in y.triangles]
        return cls(ids, np.array(edges, dtype=np.int64), np.array(tris, dtype=np.int64))

    @classmethod
    def from_masks(cls, vertex_ids: np.ndarray, edges: np.ndarray, triangles: np.ndarray) -> "HostIndex":
        """From global-id arrays (vertices sorted); faces must be present."""
        vertex_ids = np.asarray(vertex_ids, dtype=np.int64)
        return cls(vertex_ids.tolist(), np.searchsorted(vertex_ids, edges),
                   np.searchsorted(vertex_ids, triangles))


def _as_host(y) -> HostIndex:
    return y if isinstance(y, HostIndex) else HostIndex.from_complex(y)


class _Plan:
    """Static assignment order plus, per position, which placed positions
    constrain it."""

    def __init__(self, s: SimplicialComplex2):
        verts = s.vertex_ids
        adj = {v: set() for v in verts}
        for a, b in s.edges:
            adj[a].add(b)
            adj[b].add(a)
        tris_at = {v: [t for t in s.triangles if v in t] for v in verts}
        order: list[int] = []
        placed: set[int] = set()
        while len(order) < len(verts):
            def key(v):
                closing = sum(1 for t in tris_at[v] if sum(x in placed for x in t) == 2)
                return (-closing, -len(adj[v] & placed), -len(adj[v]), v)
            v = min((v for v in verts if v not in placed), key=key)
            order.append(v)
            placed.add(v)
        pos = {v: i for i, v in enumerate(order)}
        self.order = order
        self.edge_back = [[pos[u] for u in sorted(adj[v]) if pos[u] < pos[v]] for v in order]
        self.tri_back = []
        for v in order:
            pairs = []
            for t in sorted(tris_at[v]):
                others = [pos[x] for x in t if x != v]
                if all(q < pos[v] for q in others):
                    pairs.append(tuple(others))
            self.tri_back.append(pairs)
        self.degree = [len(adj[v]) for v in order]
        self.tri_count = [len(tris_at[v]) for v in order]


class _Search:
    def __init__(self, s: SimplicialComplex2, y: SimplicialComplex2, budget: int | None):
        if budget is not None and budget < 0:
            raise ValueError("budget must be >= 0")
        self.plan = _Plan(s)
        self.host = _as_host(y)
        self.budget = budget
        self.nodes = 0
        h, p = self.host, self.plan
        self.eligible = []
        for d, tc in zip(p.degree, p.tri_count):
            m = 0
            for i in range(h.n):
                if h.degree[i] >= d and h.tri_count[i] >= tc:
                    m |= 1 << i
            self.eligible.append(m)
        self.phi = [0] * len(p.order)

    def candidates(self, pos: int, used: int) -> int:
        h, p = self.host, self.plan
        cand = self.eligible[pos] & ~used
        phi = self.phi
        for q in p.edge_back[pos]:
            cand &= h.nbr[phi[q]]
            if not cand:
                return 0
        n = h.n
        for q1, q2 in p.tri_back[pos]:
            cand &= h.tri_nbr.get(phi[q1] * n + phi[q2], 0)
            if not cand:
                return 0
        return cand

    def _tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise SearchBudgetExceeded(f"node budget {self.budget} exhausted")

    def find(self, pos: int = 0, used: int = 0) -> bool:
        if pos == len(self.phi):
            return True
        self._tick()
        cand = self.candidates(pos, used)
        while cand:
            low = cand & -cand
            i = low.bit_length() - 1
            self.phi[pos] = i
            if self.find(pos + 1, used | low):
                return True
            cand ^= low
        return False

    def count(self, pos: int = 0, used: int = 0) -> int:
        if pos == len(self.phi):
            return 1
        self._tick()
        cand = self.candidates(pos, used)
        if pos == len(self.phi) - 1:
            return bin(cand).count("1")
        total = 0
        while cand:
            low = cand & -cand
            self.phi[pos] = low.bit_length() - 1
            total += self.count(pos + 1, used | low)
            cand ^= low
        return total

    def compiled(self, counting: bool) -> int:
        """Same search through the uint64 kernel (host of at most 64 vertices)."""
        h, p = self.host, self.plan
        m = len(self.phi)
        if m == 0:
            return 1
        e_ptr = np.cumsum([0] + [len(x) for x in p.edge_back]).astype(np.int64)
        t_ptr = np.cumsum([0] + [len(x) for x in p.tri_back]).astype(np.int64)
        pairs = [q for x in p.tri_back for q in x]
        phi = np.zeros(m, dtype=np.int64)
        result, self.nodes, exhausted = _kernel.search(
            m, h.nbr_bits, h.tri_matrix, np.array(self.eligible, dtype=np.uint64),
            e_ptr, np.array([q for x in p.edge_back for q in x], dtype=np.int64),
            t_ptr, np.array([a for a, _ in pairs], dtype=np.int64),
            np.array([b for _, b in pairs], dtype=np.int64),
            counting, -1 if self.budget is None else self.budget, phi)
        if exhausted:
            raise SearchBudgetExceeded(f"node budget {self.budget} exhausted")
        self.phi = [int(x) for x in phi]
        return int(result)

    def run(self, counting: bool, backend: str) -> int:
        if backend not in ("auto", "python", "compiled"):
            raise ValueError(f"unknown backend {backend!r}")
        small = self.host.n <= 64
        if backend == "compiled" and not small:
            raise ValueError("compiled backend needs a host with at most 64 vertices")
        if backend == "compiled" or (backend == "auto" and small):
            return self.compiled(counting)
        return self.count() if counting else int(self.find())


def find_embedding(source: SimplicialComplex2, host: "SimplicialComplex2 | HostIndex",
                   budget: int | None = None, *, backend: str = "auto") -> EmbeddingMap | None:
    """A simplicial embedding of ``source`` into ``host``, or None if there is
    none.  Raises :class:`SearchBudgetExceeded` if ``budget`` node expansions
    do not settle the question.

    ``backend`` picks the compiled kernel (hosts up to 64 vertices) or the
    pure Python search; ``"auto"`` uses the kernel when it applies.  Both
    return the same witness and spend the same number of nodes.
    """
    search = _Search(source, host, budget)
    if not search.run(False, backend):
        return None
    ids = search.host.ids
    return EmbeddingMap({v: ids[i] for v, i in zip(search.plan.order, search.phi)})


def count_embeddings(source: SimplicialComplex2, host: "SimplicialComplex2 | HostIndex",
                     budget: int | None = None, *, backend: str = "auto") -> int:
    """Number of labelled simplicial embeddings (injections, no quotient by
    automorphisms)."""
    return _Search(source, host, budget).run(True, backend)


def count_embeddings_bruteforce(source: SimplicialComplex2, host: SimplicialComplex2) -> int:
    """Try every injection of vertices; reference for :func:`count_embeddings`."""
    sv, hv = source.vertex_ids, host.vertex_ids
    if len(sv) > len(hv):
        return 0
    if math.perm(len(hv), len(sv)) > BRUTE_FORCE_LIMIT:
        raise ValueError("brute-force injection count over budget")
    simplices = list(source)
    total = 0
    for image in permutations(hv, len(sv)):
        m = dict(zip(sv, image))
        if all(tuple(sorted(m[v] for v in s)) in host for s in simplices):
            total += 1
    return total


# -- catalog ---------------------------------------------------------------

class TorusTriangulation(SimplicialComplex2):
    """A complex certified to be a closed connected surface with Euler
    characteristic 0."""

    @classmethod
    def certify(cls, c: SimplicialComplex2) -> "TorusTriangulation":
        problems = surface_diagnostics(c)
        if problems or euler_characteristic(c) != 0:
            raise AssertionError(f"not a torus triangulation: {problems or 'chi != 0'}")
        f = f_vector(c)
        assert f.f1 == 3 * f.f0 and f.f2 == 2 * f.f0
        return cls(c.vertices, c.edges, c.triangles)


def torus_7() -> TorusTriangulation:
    """The 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    tris = []
    for i in range(7):
        tris.append(((i) % 7, (i + 1) % 7, (i + 3) % 7))
        tris.append(((i) % 7, (i + 2) % 7, (i + 3) % 7))
    return TorusTriangulation.certify(from_maximal_simplices(tris))


def tetrahedron_boundary() -> SimplicialComplex2:
    return from_maximal_simplices(list(combinations(range(4), 3)))


# -- first moment ------------------------------------------------------------

def falling_factorial(n: int, k: int) -> int:
    return math.perm(n, k) if 0 <= k <= n else 0


def expected_embedding_count(source: SimplicialComplex2, n: int, p, exact: bool = False):
    """``n (n-1) ... (n-f0+1) * p0^f0 p1^f1 p2^f2``.

    With ``exact=True`` the probabilities are turned into Fractions (pass
    Fractions or ints for a truly exact result).
    """
    f0, f1, f2 = f_vector(source)
    ff = falling_factorial(n, f0)
    if exact:
        p0, p1, p2 = (Fraction(x) for x in p)
        return ff * p0 ** f0 * p1 ** f1 * p2 ** f2
    p0, p1, p2 = (float(x) for x in p)
    return ff * p0 ** f0 * p1 ** f1 * p2 ** f2


def embedding_probability_upper_bound(source: SimplicialComplex2, n: int, p, exact: bool = False):
    """``n^f0 * p0^f0 p1^f1 p2^f2``, the union bound over all injections."""
    f0, f1, f2 = f_vector(source)
    conv = Fraction if exact else float
    p0, p1, p2 = (conv(x) for x in p)
    return n ** f0 * p0 ** f0 * p1 ** f1 * p2 ** f2


def threshold_margin(n: int, p, epsilon: float | None = None):
    """``n p0 p1^3 p2^2``; with ``epsilon`` also ``n p0 p1^(3+eps) p2^(2+eps)``."""
    p0, p1, p2 = (float(x) for x in p)
    margin = n * p0 * p1 ** 3 * p2 ** 2
    if epsilon is None:
        return margin
    return margin, n * p0 * p1 ** (3 + epsilon) * p2 ** (2 + epsilon)


def alpha_margin(n: int, alpha) -> float:
    """Threshold quantity for ``p_i = n^-alpha_i``, as ``n^(1 - (a0 + 3 a1 + 2 a2))``.

    Exponents are summed as Fractions so points on the critical plane give
    exactly 1.
    """
    a0, a1, a2 = (Fraction(str(a)) if isinstance(a, float) else Fraction(a) for a in alpha)
    return float(n) ** float(1 - (a0 + 3 * a1 + 2 * a2))


def torus_union_bound(n: int, p, c: float = 1.0) -> float:
    """``u / (1 - u)`` with ``u = c n p0 p1^3 p2^2``; ``inf`` once ``u >= 1``
    (the geometric series diverges)."""
    if c < 1:
        raise ValueError("c must be >= 1")
    u = c * threshold_margin(n, p)
    if u >= 1:
        return math.inf
    return u / (1 - u)
