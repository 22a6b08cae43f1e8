"""Compiled backtracking for hosts with at most 64 vertices.

Mirrors ``embedding._Search`` step for step (same order, same lowest-bit
candidate choice, same node accounting) on uint64 bitsets.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True, nogil=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, nogil=True)
def _lowest_index(x):
    i = 0
    while (x & _ONE) == _ZERO:
        x >>= _ONE
        i += 1
    return i


@njit(cache=True, nogil=True)
def _candidates(pos, used, phi, nbr, tri, eligible, e_ptr, e_idx, t_ptr, t_a, t_b):
    cand = eligible[pos] & ~used
    for j in range(e_ptr[pos], e_ptr[pos + 1]):
        cand &= nbr[phi[e_idx[j]]]
        if cand == _ZERO:
            return cand
    for j in range(t_ptr[pos], t_ptr[pos + 1]):
        cand &= tri[phi[t_a[j]], phi[t_b[j]]]
        if cand == _ZERO:
            return cand
    return cand


@njit(cache=True, nogil=True)
def search(m, nbr, tri, eligible, e_ptr, e_idx, t_ptr, t_a, t_b, counting, budget, phi):
    """Returns ``(count_or_found, nodes, exhausted)``; ``phi`` holds the
    witness when one is found."""
    cand = np.zeros(m, dtype=np.uint64)
    used = np.zeros(m, dtype=np.uint64)
    nodes = 1
    if budget >= 0 and nodes > budget:
        return 0, nodes, True
    c = _candidates(0, _ZERO, phi, nbr, tri, eligible, e_ptr, e_idx, t_ptr, t_a, t_b)
    if m == 1:
        if counting:
            return _popcount(c), nodes, False
        if c != _ZERO:
            phi[0] = _lowest_index(c)
            return 1, nodes, False
        return 0, nodes, False
    total = 0
    pos = 0
    cand[0] = c
    while pos >= 0:
        if cand[pos] == _ZERO:
            pos -= 1
            continue
        low = cand[pos] & (~cand[pos] + _ONE)
        cand[pos] ^= low
        phi[pos] = _lowest_index(low)
        nu = used[pos] | low
        nodes += 1
        if budget >= 0 and nodes > budget:
            return total, nodes, True
        c = _candidates(pos + 1, nu, phi, nbr, tri, eligible, e_ptr, e_idx, t_ptr, t_a, t_b)
        if pos + 1 == m - 1:
            if counting:
                total += _popcount(c)
            elif c != _ZERO:
                phi[m - 1] = _lowest_index(c)
                return 1, nodes, False
            continue
        pos += 1
        used[pos] = nu
        cand[pos] = c
    return total, nodes, False
