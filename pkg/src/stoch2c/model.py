"""The multi-parameter lower model of random 2-complexes.

Each ``i``-simplex of the full complex on ``n`` vertices enters a random set
``X`` with probability ``p_i``; the sample is the largest subcomplex of ``X``.
Sampling is driven by one counter-based uniform per simplex, so samples for
different ``p`` under the same seed are nested (monotone coupling).

The exact path (``probability_of``, ``enumerate_distribution``) works on
``Fraction`` probabilities and is kept apart from the floating path.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Union

import numpy as np

from .complex import (ComplexError, Simplex, SimplicialComplex2, external_set,
                      make_simplex)
from .rng import check_seed, colex_rank, colex_tables, uniforms

Prob = Union[Fraction, float, int]


@dataclass(frozen=True)
class ProbabilityTriple:
    p0: Prob
    p1: Prob
    p2: Prob

    def __post_init__(self):
        for p in self:
            if not 0 <= p <= 1:
                raise ValueError(f"probability {p} outside [0, 1]")

    def __iter__(self) -> Iterator[Prob]:
        return iter((self.p0, self.p1, self.p2))

    def __getitem__(self, i: int) -> Prob:
        return (self.p0, self.p1, self.p2)[i]

    def __le__(self, other: "ProbabilityTriple") -> bool:
        return all(a <= b for a, b in zip(self, other))

    @classmethod
    def from_alpha(cls, n: int, alpha) -> "ProbabilityTriple":
        """``p_i = n ** -alpha_i``."""
        if any(a < 0 for a in alpha):
            raise ValueError("alpha components must be >= 0")
        return cls(*(float(n) ** -float(a) for a in alpha))

    @property
    def q(self) -> tuple:
        return tuple(1 - p for p in self)

    def is_exact(self) -> bool:
        return all(isinstance(p, (Fraction, int)) for p in self)


def _as_triple(p) -> ProbabilityTriple:
    return p if isinstance(p, ProbabilityTriple) else ProbabilityTriple(*p)


def num_simplices(n: int) -> tuple[int, int, int]:
    return n, comb(n, 2), comb(n, 3)


@dataclass(frozen=True, eq=False)
class CoupledSample:
    """One uniform per simplex of the full complex on ``n`` vertices.

    ``u[d][r]`` belongs to the ``d``-simplex of colex rank ``r``.
    """

    n: int
    seed: int
    u: tuple

    def uniform(self, s: Iterable[int]) -> float:
        s = make_simplex(s)
        if s[-1] >= self.n:
            raise KeyError(s)
        return float(self.u[len(s) - 1][colex_rank(s)])

    def simplices(self) -> Iterator[Simplex]:
        for d in range(3):
            yield from combinations(range(self.n), d + 1)

    def items(self) -> Iterator[tuple[Simplex, float]]:
        for s in self.simplices():
            yield s, float(self.u[len(s) - 1][colex_rank(s)])

    def __len__(self) -> int:
        return sum(num_simplices(self.n))


def draw_coupled(n: int, seed: int) -> CoupledSample:
    if n < 1:
        raise ValueError("n must be >= 1")
    check_seed(seed)
    u = tuple(uniforms(seed, d, k) for d, k in enumerate(num_simplices(n)))
    for arr in u:
        arr.setflags(write=False)
    return CoupledSample(n, seed, u)


def _masks_X(c: CoupledSample, p: ProbabilityTriple):
    return [c.u[d] < float(p[d]) for d in range(3)]


def sample_X(c: CoupledSample, p) -> set[Simplex]:
    """``X = {s : uniform(s) < p_dim(s)}``."""
    p = _as_triple(p)
    vm, em, tm = _masks_X(c, p)
    edges, tris, _ = colex_tables(c.n)
    out: set[Simplex] = {(int(v),) for v in np.flatnonzero(vm)}
    out.update((int(a), int(b)) for a, b in edges[em])
    out.update((int(a), int(b), int(x)) for a, b, x in tris[tm])
    return out


def lower_complex(x: Iterable[Iterable[int]]) -> SimplicialComplex2:
    """Largest subcomplex contained in the simplex set ``x``, built bottom-up."""
    by_dim: list[set] = [set(), set(), set()]
    for s in x:
        s = make_simplex(s)
        by_dim[len(s) - 1].add(s)
    verts = frozenset(by_dim[0])
    edges = frozenset(e for e in by_dim[1] if (e[0],) in verts and (e[1],) in verts)
    tris = frozenset(t for t in by_dim[2]
                     if all(e in edges for e in combinations(t, 2)))
    return SimplicialComplex2(verts, edges, tris)


def lower_masks(c: CoupledSample, p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised :func:`lower_complex` of ``sample_X``: boolean masks over
    vertices, colex-ranked edges and colex-ranked triangles."""
    p = _as_triple(p)
    vm, em, tm = _masks_X(c, p)
    edges, _, tri_edges = colex_tables(c.n)
    em = em & vm[edges[:, 0]] & vm[edges[:, 1]]
    tm = tm & em[tri_edges[:, 0]] & em[tri_edges[:, 1]] & em[tri_edges[:, 2]]
    return vm, em, tm


def complex_from_masks(n: int, vm, em, tm) -> SimplicialComplex2:
    edges, tris, _ = colex_tables(n)
    return SimplicialComplex2(
        frozenset((int(v),) for v in np.flatnonzero(vm)),
        frozenset(map(tuple, edges[em].tolist())),
        frozenset(map(tuple, tris[tm].tolist())),
    )


def sample_Y(n: int, p, seed: int) -> SimplicialComplex2:
    c = draw_coupled(n, seed)
    return complex_from_masks(n, *lower_masks(c, p))


def _check_in_full(y: SimplicialComplex2, n: int) -> None:
    if any(v >= n for v in y.vertex_ids):
        raise ComplexError(f"complex is not a subcomplex of the full complex on {n} vertices")


def probability_of(y: SimplicialComplex2, n: int, p) -> Fraction:
    """Exact probability that the lower model on ``n`` vertices returns ``y``:
    product of ``p_dim`` over simplices of ``y`` and of ``q_dim`` over its
    external simplices."""
    p = _as_triple(p)
    if not p.is_exact():
        raise TypeError("probability_of needs exact (Fraction/int) probabilities")
    _check_in_full(y, n)
    q = p.q
    out = Fraction(1)
    for d in range(3):
        out *= Fraction(p[d]) ** len(y.simplices(d))
    for s in external_set(y, n):
        out *= q[len(s) - 1]
    return out


def log_probability_of(y: SimplicialComplex2, n: int, p) -> float:
    """Natural log of :func:`probability_of` as a sum of logs; ``-inf`` when
    any factor vanishes."""
    p = _as_triple(p)
    _check_in_full(y, n)
    ext = [0, 0, 0]
    for s in external_set(y, n):
        ext[len(s) - 1] += 1
    total = 0.0
    for d in range(3):
        for base, count in ((float(p[d]), len(y.simplices(d))), (1.0 - float(p[d]), ext[d])):
            if count == 0:
                continue
            if base <= 0.0:
                return -math.inf
            total += count * math.log(base)
    return total


def enumerate_distribution(n: int, p, *, allow_n5: bool = False) -> dict[SimplicialComplex2, Fraction]:
    """Law of the sample by brute force over every subset ``X``.

    Each ``X`` is weighted by its product of ``p``'s and ``q``'s and pushed
    through :func:`lower_complex`.  ``n <= 4`` (2^14 subsets); ``n = 5``
    (2^25) only with ``allow_n5``.
    """
    p = _as_triple(p)
    if not p.is_exact():
        raise TypeError("enumerate_distribution needs exact probabilities")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > 5 or (n == 5 and not allow_n5):
        raise ValueError(f"n={n} too large for exhaustive enumeration")
    if n == 5:
        warnings.warn("n=5 enumerates 2^25 subsets; this is slow", RuntimeWarning)
    verts = list(range(n))
    edges = list(combinations(verts, 2))
    tris = list(combinations(verts, 3))
    q = p.q
    powers = []
    for d, k in enumerate((len(verts), len(edges), len(tris))):
        pd, qd = Fraction(p[d]), Fraction(q[d])
        powers.append([pd ** j * qd ** (k - j) for j in range(k + 1)])
    # bit masks of the faces each simplex needs
    e_need = [(1 << a) | (1 << b) for a, b in edges]
    eidx = {e: j for j, e in enumerate(edges)}
    t_need = [sum(1 << eidx[e] for e in combinations(t, 2)) for t in tris]

    acc: dict[tuple[int, int, int], Fraction] = {}
    for vm in range(1 << len(verts)):
        wv = powers[0][bin(vm).count("1")]
        ok_e = [j for j, need in enumerate(e_need) if vm & need == need]
        for em in range(1 << len(edges)):
            we = wv * powers[1][bin(em).count("1")]
            em_y = sum(1 << j for j in ok_e if em >> j & 1)
            ok_t = [j for j, need in enumerate(t_need) if em_y & need == need]
            by_tri: dict[int, Fraction] = {}
            for tm in range(1 << len(tris)):
                tm_y = sum(1 << j for j in ok_t if tm >> j & 1)
                w = powers[2][bin(tm).count("1")]
                by_tri[tm_y] = by_tri.get(tm_y, 0) + w
            for tm_y, w in by_tri.items():
                key = (vm, em_y, tm_y)
                acc[key] = acc.get(key, 0) + we * w
    out: dict[SimplicialComplex2, Fraction] = {}
    for (vm, em, tm), w in acc.items():
        if w == 0:
            continue
        y = SimplicialComplex2(
            frozenset((v,) for v in verts if vm >> v & 1),
            frozenset(e for j, e in enumerate(edges) if em >> j & 1),
            frozenset(t for j, t in enumerate(tris) if tm >> j & 1),
        )
        out[y] = out.get(y, 0) + w
    return out
