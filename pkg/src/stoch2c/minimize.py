"""Minimum of ``mu_i`` over subcomplexes.

Only the reduced search spaces are walked: for ``i = 2`` unions of closed
2-simplices, for ``i = 1`` edge sets (graphs without isolated vertices).
Either way a subset of "items" is chosen and ``f0`` is the number of
vertices the chosen items cover, so both cases share one engine.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .complex import SimplicialComplex2, all_subcomplexes, mu

DEFAULT_BUDGET = 1 << 26
_CHUNK = 1 << 20


class BudgetExceeded(RuntimeError):
    pass


class NoSubcomplex(ValueError):
    pass


@dataclass(frozen=True)
class MuMinResult:
    value: Fraction
    witness: SimplicialComplex2
    mode: str
    evaluated: int


def _items(c: SimplicialComplex2, i: int):
    if i == 2:
        items = c.sorted_simplices(2)
    elif i == 1:
        items = c.sorted_simplices(1)
    else:
        raise ValueError("i must be 1 or 2")
    verts = sorted({v for s in items for v in s})
    return items, verts


def _witness(items, mask: int) -> SimplicialComplex2:
    return SimplicialComplex2.from_simplices(
        s for j, s in enumerate(items) if mask >> j & 1)


def _lex_least(masks: np.ndarray) -> int:
    """Mask whose sorted index tuple is lexicographically least.

    A proper prefix sorts first, as with Python tuples.
    """
    cand = np.unique(masks.astype(np.int64))
    prefix = 0
    while True:
        done = cand == prefix
        if done.any():
            return prefix
        rest = cand & ~prefix
        low = rest & -rest
        best = low.min()
        cand = cand[low == best]
        prefix |= int(best)


def _exhaustive(items, incidence):
    m = len(items)
    total = 1 << m
    best: Fraction | None = None
    best_masks: list[int] = []
    # popcount table over 13-bit slices
    table = np.array([bin(j).count("1") for j in range(1 << 13)], dtype=np.int64)
    low_bits = np.uint64((1 << 13) - 1)
    for start in range(1, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        masks = np.arange(start, stop, dtype=np.uint64)
        fi = np.zeros(len(masks), dtype=np.int64)
        for shift in range(0, m, 13):
            fi += table[((masks >> np.uint64(shift)) & low_bits).astype(np.int64)]
        f0 = np.zeros(len(masks), dtype=np.int64)
        for inc in incidence:
            f0 += (masks & np.uint64(inc)) != 0
        # minimum f0 for each possible f_i, then exact comparison
        chunk_best = None
        for c in np.unique(fi):
            sel = fi == c
            r = Fraction(int(f0[sel].min()), int(c))
            if chunk_best is None or r < chunk_best:
                chunk_best = r
        if best is None or chunk_best < best:
            best, best_masks = chunk_best, []
        if chunk_best == best:
            hit = f0 * best.denominator == fi * best.numerator
            best_masks.append(_lex_least(masks[hit]))
    return best, _lex_least(np.array(best_masks, dtype=np.int64)), total - 1


def _ratio(mask: int, incidence_by_item) -> Fraction | None:
    if mask == 0:
        return None
    covered = 0
    count = 0
    j = 0
    while mask >> j:
        if mask >> j & 1:
            covered |= incidence_by_item[j]
            count += 1
        j += 1
    return Fraction(bin(covered).count("1"), count)


def _bits(mask: int) -> tuple[int, ...]:
    return tuple(j for j in range(mask.bit_length()) if mask >> j & 1)


def _sampled(items, verts, count: int, seed: int):
    m = len(items)
    vindex = {v: j for j, v in enumerate(verts)}
    by_item = [sum(1 << vindex[v] for v in s) for s in items]
    rng = random.Random(seed)
    best: Fraction | None = None
    best_mask = 0
    evaluated = 0
    for _ in range(count):
        mask = 0
        while mask == 0:
            mask = rng.getrandbits(m)
        cur = _ratio(mask, by_item)
        evaluated += 1
        improved = True
        while improved:
            improved = False
            for j in range(m):
                trial = mask ^ (1 << j)
                r = _ratio(trial, by_item)
                evaluated += 1
                if r is not None and r < cur:
                    mask, cur, improved = trial, r, True
        if best is None or cur < best or (cur == best and _bits(mask) < _bits(best_mask)):
            best, best_mask = cur, mask
    return best, best_mask, evaluated


def mu_min(c: SimplicialComplex2, i: int,
           mode: Literal["exhaustive", "sampled"] = "exhaustive", *,
           count: int = 1000, seed: int = 0,
           budget: int = DEFAULT_BUDGET) -> MuMinResult:
    """Minimise ``mu_i`` over subcomplexes of ``c`` with ``f_i > 0``.

    ``exhaustive`` walks every nonempty subset of items and is exact; ties are
    broken by the lexicographically least sorted item tuple. ``sampled``
    draws ``count`` uniform random subsets and improves each by single-item
    toggles while ``mu_i`` strictly decreases; it yields an upper bound.
    """
    items, verts = _items(c, i)
    if not items:
        raise NoSubcomplex(f"no subcomplex with f{i}>0")
    if mode == "exhaustive":
        if (1 << len(items)) > budget:
            raise BudgetExceeded(
                f"2^{len(items)} subsets exceed budget {budget}")
        incidence = [sum(1 << j for j, s in enumerate(items) if v in s) for v in verts]
        value, mask, evaluated = _exhaustive(items, incidence)
    elif mode == "sampled":
        value, mask, evaluated = _sampled(items, verts, count, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return MuMinResult(value, _witness(items, mask), mode, evaluated)


def mu_min_naive(c: SimplicialComplex2, i: int) -> Fraction:
    """Reference minimum over every subcomplex, with no reductions."""
    best = None
    for t in all_subcomplexes(c):
        r = mu(t, i)
        if r is not None and (best is None or r < best):
            best = r
    if best is None:
        raise NoSubcomplex(f"no subcomplex with f{i}>0")
    return best
