"""Domains in the open subdivided triangle and their mu-ratios.

A domain of type ``d`` is the open interior ``V_k`` of the subdivided
triangle with a set ``L`` of closed ``d``-simplices removed: an open cell
survives iff it is interior and is not a face of (or equal to) a member of
``L``.  Cells are named by global vertex ids of the standard subdivided
triangle (see :func:`stoch2c.subdivision.subdivided_triangle`).

The verifiers enumerate removed sets as bit masks over the removable cells
(all triangles for type 2, interior edges for type 1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Literal

import numpy as np

from .complex import FVector, Simplex
from .subdivision import (DIRECTIONS, OpenComplex, hex_lattice, side_length,
                          subdivided_triangle, v_k_open)

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = {2: 24, 1: 24}
_CHUNK = 1 << 20


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Domain:
    k: int
    d: int
    removed: frozenset
    cells: OpenComplex = field(compare=False)

    def f_vector(self) -> FVector:
        return self.cells.f_vector()


def make_domain(k: int, removed: Iterable[Iterable[int]], d: int) -> Domain:
    """Open cells of ``V_k`` left after deleting the closed simplices ``removed``."""
    if d not in (1, 2):
        raise DomainError("domain type must be 1 or 2")
    sub = subdivided_triangle(k).complex
    L = set()
    for raw in removed:
        s = tuple(sorted(raw))
        if len(s) != d + 1:
            raise DomainError(f"{s} has dimension {len(s) - 1}, expected {d}")
        if s not in sub:
            raise DomainError(f"{s} is not a simplex of the subdivided triangle")
        L.add(s)
    dead: set = set()
    for s in L:
        dead.add(s)
        for r in range(1, len(s)):
            dead.update(combinations(s, r))
    vk = v_k_open(k)
    cells = OpenComplex(k, *(frozenset(c for c in vk.cells(j) if c not in dead)
                            for j in range(3)))
    return Domain(k, d, frozenset(L), cells)


def open_mu(u: OpenComplex | Domain, i: int) -> Fraction | None:
    """Exact ``f0/f_i`` over open cells; None when ``f_i == 0``."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    f = u.f_vector()
    if f[i] == 0:
        return None
    return Fraction(f.f0, f[i])


# -- lattice view ---------------------------------------------------------

@dataclass(frozen=True)
class DomainSpace:
    """Removable cells of one type at one depth, with kill masks.

    ``items`` are the removable closed simplices (lattice coordinates);
    ``kill[j]`` is the boolean matrix row telling which items delete open
    cell ``j`` of ``V_k``; ``cell_dims`` gives each cell's dimension.
    """

    k: int
    d: int
    items: tuple
    cells: tuple
    cell_dims: np.ndarray
    kill: np.ndarray  # (len(cells), len(items)) bool

    @property
    def m(self) -> int:
        return len(self.items)

    def kill_masks(self) -> list[int]:
        """Per-cell kill sets as Python int bit masks over items."""
        out = []
        for row in self.kill:
            out.append(sum(1 << int(j) for j in np.flatnonzero(row)))
        return out

    def gid(self, cell) -> Simplex:
        tri = subdivided_triangle(self.k)
        return tuple(sorted(tri.charts[((0, 1, 2), p)] for p in cell))

    def removed_simplices(self, mask: int) -> list[Simplex]:
        return [self.gid(self.items[j]) for j in range(self.m) if mask >> j & 1]

    def domain(self, mask: int) -> Domain:
        return make_domain(self.k, self.removed_simplices(mask), self.d)


@lru_cache(maxsize=None)
def domain_space(k: int, d: int) -> DomainSpace:
    s = side_length(k)
    lat = hex_lattice(s)
    tri_count: dict = {}
    for t in lat.triangles:
        for e in combinations(t, 2):
            tri_count[e] = tri_count.get(e, 0) + 1
    ivert = [(p,) for p in lat.points if not lat.is_boundary_point(p)]
    iedge = [e for e in lat.edges if tri_count[e] == 2]
    tris = list(lat.triangles)
    cells = ivert + iedge + tris
    dims = np.array([len(c) - 1 for c in cells], dtype=np.int64)
    if d == 2:
        items = tris
    elif d == 1:
        items = iedge
    else:
        raise DomainError("domain type must be 1 or 2")
    kill = np.zeros((len(cells), len(items)), dtype=bool)
    for j, it in enumerate(items):
        closure = {it} | {f for r in range(1, len(it)) for f in combinations(it, r)}
        for ci, c in enumerate(cells):
            if c in closure:
                kill[ci, j] = True
    kill.setflags(write=False)
    return DomainSpace(k, d, tuple(items), tuple(cells), dims, kill)


@dataclass(frozen=True)
class SixTuple:
    """Cyclic x/o word of length 6, read counter-clockwise from direction (1, 0)."""

    symbols: str

    def __post_init__(self):
        if len(self.symbols) != 6 or set(self.symbols) - {"x", "o"}:
            raise ValueError(f"bad six-tuple {self.symbols!r}")

    def count(self, ch: str) -> int:
        return self.symbols.count(ch)

    def contains(self, fragment: str) -> bool:
        """Cyclic substring test."""
        return fragment in self.symbols + self.symbols[:len(fragment) - 1]

    def __str__(self) -> str:
        return self.symbols


def six_tuple(domain: Domain, point: tuple[int, int]) -> SixTuple:
    """Word of the six triangles (type 2) or edges (type 1) around a lattice
    point of the closed subdivided triangle; cells outside ``V_k`` read as x."""
    s = side_length(domain.k)
    lat = hex_lattice(s)
    if point not in set(lat.points):
        raise DomainError(f"{point} is not a lattice point at k={domain.k}")
    tri = subdivided_triangle(domain.k)

    def gid(cell):
        return tuple(sorted(tri.charts[((0, 1, 2), p)] for p in cell))

    a, b = point
    vk_cells = v_k_open(domain.k).cells(domain.d)
    lattice_cells = set(lat.triangles) if domain.d == 2 else set(lat.edges)
    out = []
    for j in range(6):
        da, db = DIRECTIONS[j]
        if domain.d == 2:
            ea, eb = DIRECTIONS[(j + 1) % 6]
            cell = tuple(sorted([(a, b), (a + da, b + db), (a + ea, b + eb)]))
        else:
            cell = tuple(sorted([(a, b), (a + da, b + db)]))
        if cell not in lattice_cells or gid(cell) not in vk_cells:
            out.append("x")
        elif gid(cell) in domain.removed:
            out.append("x")
        else:
            out.append("o")
    return SixTuple("".join(out))


# -- verifiers -----------------------------------------------------------

@dataclass
class DomainReport:
    k: int
    d: int
    check: str
    mode: str
    checked: int = 0
    counterexamples: int = 0
    examples: list = field(default_factory=list)
    min_mu: Fraction | None = None
    max_mu: Fraction | None = None
    reference: Fraction | None = None
    verdicts: list | None = None

    @property
    def passed(self) -> bool:
        return self.counterexamples == 0

    def verdict(self) -> str:
        word = "PASS" if self.passed else "FAIL"
        ref = f" reference={self.reference}" if self.reference is not None else ""
        return (f"{self.check} k={self.k} type={self.d} mode={self.mode}: {word} "
                f"checked={self.checked} counterexamples={self.counterexamples}"
                f" min_mu={self.min_mu} max_mu={self.max_mu}{ref}")

    def _note_range(self, f0: np.ndarray, fi: np.ndarray) -> None:
        ok = fi > 0
        if not ok.any():
            return
        f0, fi = f0[ok], fi[ok]
        # exact extremes: the best ratio per distinct denominator
        for den in np.unique(fi):
            sel = fi == den
            lo = Fraction(int(f0[sel].min()), int(den))
            hi = Fraction(int(f0[sel].max()), int(den))
            if self.min_mu is None or lo < self.min_mu:
                self.min_mu = lo
            if self.max_mu is None or hi > self.max_mu:
                self.max_mu = hi


def _counts_from_masks(space: DomainSpace, masks: np.ndarray) -> np.ndarray:
    """(len(masks), 3) surviving cell counts for uint64 item masks."""
    out = np.zeros((len(masks), 3), dtype=np.int64)
    for row, dim_ in zip(space.kill_masks(), space.cell_dims):
        alive = (masks & np.uint64(row)) == 0
        out[:, dim_] += alive
    return out


def _counts_from_matrix(space: DomainSpace, removed: np.ndarray) -> np.ndarray:
    """Same, for a boolean (samples, items) removal matrix."""
    hits = removed.astype(np.float32) @ space.kill.T.astype(np.float32)
    alive = hits < 0.5
    out = np.zeros((len(removed), 3), dtype=np.int64)
    for dim_ in range(3):
        out[:, dim_] = alive[:, space.cell_dims == dim_].sum(axis=1)
    return out


def _mask_chunks(m: int):
    total = 1 << m
    for start in range(0, total, _CHUNK):
        yield np.arange(start, min(total, start + _CHUNK), dtype=np.uint64)


def _sample_chunks(m: int, count: int, seed: int, chunk: int = 1 << 15):
    """Random removal sets: per sample a density q ~ U(0,1), then each item
    is removed independently with probability q."""
    rng = np.random.default_rng(seed)
    done = 0
    while done < count:
        n = min(chunk, count - done)
        q = rng.random(n)
        yield rng.random((n, m)) < q[:, None]
        done += n


def _matrix_to_masks(removed: np.ndarray) -> list[int]:
    weights = [1 << j for j in range(removed.shape[1])]
    return [sum(w for w, bit in zip(weights, row) if bit) for row in removed]


def _iterate(space: DomainSpace, mode: str, samples: int, seed: int,
             allow_large: bool):
    """Yield (masks-as-ints-or-None, counts, matrix-or-None) chunks."""
    if mode == "exhaustive":
        if space.m > EXHAUSTIVE_LIMIT[space.d] and not allow_large:
            raise DomainError(
                f"exhaustive type-{space.d} at k={space.k} needs 2^{space.m} domains; "
                "pass allow_large=True to force")
        if space.m > 63:
            raise DomainError("exhaustive enumeration limited to 63 items")
        for masks in _mask_chunks(space.m):
            yield masks, _counts_from_masks(space, masks), None
    elif mode == "sampled":
        for removed in _sample_chunks(space.m, samples, seed):
            yield None, _counts_from_matrix(space, removed), removed
    else:
        raise ValueError(f"unknown mode {mode!r}")


def _record_examples(report, masks, removed, bad, limit=10):
    if len(report.examples) >= limit or not bad.any():
        return
    idx = np.flatnonzero(bad)[: limit - len(report.examples)]
    if masks is not None:
        report.examples.extend(int(masks[i]) for i in idx)
    else:
        report.examples.extend(_matrix_to_masks(removed[idx]))


def verify_lemma_01(k: int, d: int = 2, mode: Literal["exhaustive", "sampled"] = "exhaustive",
                    *, samples: int = 10**6, seed: int = 0,
                    allow_large: bool = False) -> DomainReport:
    """Check ``mu_1 < 1/3`` and ``mu_2 < 1/2`` on every (or sampled) domain,
    whenever the ratio is defined.  ``min_mu``/``max_mu`` track ``mu_2``."""
    space = domain_space(k, d)
    rep = DomainReport(k, d, "lemma01", mode)
    for masks, counts, removed in _iterate(space, mode, samples, seed, allow_large):
        f0, f1, f2 = counts.T
        bad = ((f1 > 0) & (3 * f0 >= f1)) | ((f2 > 0) & (2 * f0 >= f2))
        rep.checked += len(counts)
        rep.counterexamples += int(bad.sum())
        rep._note_range(f0, f2)
        _record_examples(rep, masks, removed, bad)
    return rep


def prop_u_verdicts(counts: np.ndarray, d: int, ref: FVector,
                    proper: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(tested, failing) flags: a proper domain with ``mu_d`` defined fails
    when ``mu_d(U) >= mu_d(V_k)``."""
    f0, fd = counts[:, 0], counts[:, d]
    tested = proper & (fd > 0)
    failing = tested & (f0 * ref[d] >= ref.f0 * fd)
    return tested, failing


def verify_prop_u(k: int, d: int = 2, mode: Literal["exhaustive", "sampled"] = "exhaustive",
                  *, samples: int = 10**6, seed: int = 0,
                  allow_large: bool = False, keep: bool = False) -> DomainReport:
    """Compare ``mu_d`` of each proper domain with ``mu_d(V_k)``.

    Counterexamples at small ``k`` are findings, not errors: the comparison
    is only claimed for large enough ``k``.  With ``keep=True`` the report
    carries ``verdicts``: (mask, tested, failing) triples for every domain seen.
    """
    space = domain_space(k, d)
    ref = v_k_open(k).f_vector()
    rep = DomainReport(k, d, "prop_u", mode, reference=Fraction(ref.f0, ref[d]))
    kept = []
    for masks, counts, removed in _iterate(space, mode, samples, seed, allow_large):
        proper = removed.any(axis=1) if removed is not None else masks != 0
        tested, failing = prop_u_verdicts(counts, d, ref, proper)
        rep.checked += int(tested.sum())
        rep.counterexamples += int(failing.sum())
        rep._note_range(counts[tested, 0], counts[tested, d])
        _record_examples(rep, masks, removed, failing)
        if keep:
            ints = [int(x) for x in masks] if masks is not None else _matrix_to_masks(removed)
            kept.extend(zip(ints, tested.tolist(), failing.tolist()))
    if keep:
        rep.verdicts = kept
    if rep.counterexamples:
        log.info("prop_u k=%d type=%d: %d counterexamples", k, d, rep.counterexamples)
    return rep


def prop_u_scan(ks: Iterable[int], d: int, mode: str = "exhaustive", **kw):
    """Run :func:`verify_prop_u` for each ``k``; return (reports, smallest k
    with no counterexample or None)."""
    reports = [verify_prop_u(k, d, mode, **kw) for k in ks]
    clean = [r.k for r in reports if r.passed]
    return reports, (min(clean) if clean else None)
