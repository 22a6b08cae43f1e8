"""Counter-based uniforms keyed by (seed, simplex).

Every simplex of the full complex gets a uniform in [0, 1) that depends only
on the seed, its dimension and its colex rank, never on draw order or ``n``.
The bits come from the Philox4x64 block cipher: the 128-bit key is the seed,
the top counter word is the dimension and the bottom word walks the rank.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

SEED_BITS = 128
_MASK128 = (1 << 128) - 1
_MUL1 = 0x9E3779B97F4A7C15F39CC0605CEDC835  # odd
_MUL2 = 0xD6E8FEB86659FD93A5A3C1A2D5B3E5F1  # odd


def check_seed(seed: int) -> int:
    if not 0 <= seed < 1 << SEED_BITS:
        raise ValueError(f"seed must lie in [0, 2^{SEED_BITS})")
    return seed


def derive_seed(master: int, cell: int, trial: int) -> int:
    """Injective map (master < 2^64, cell < 2^32, trial < 2^32) -> 128-bit seed.

    Packing followed by a bijective mix, so distinct triples never collide.
    """
    if not (0 <= master < 1 << 64 and 0 <= cell < 1 << 32 and 0 <= trial < 1 << 32):
        raise ValueError("master/cell/trial out of range")
    x = master << 64 | cell << 32 | trial
    x = (x * _MUL1) & _MASK128
    x ^= x >> 67
    x = (x * _MUL2) & _MASK128
    x ^= x >> 59
    return x


def colex_rank(s: tuple[int, ...]) -> int:
    """Rank of a sorted simplex among simplices of its dimension, colex order."""
    return sum(comb(v, j + 1) for j, v in enumerate(s))


def raw_stream(seed: int, d: int, count: int) -> np.ndarray:
    bg = np.random.Philox(key=check_seed(seed), counter=[0, 0, 0, d])
    return bg.random_raw(count)


def uniforms(seed: int, d: int, count: int) -> np.ndarray:
    """First ``count`` uniforms (by colex rank) for dimension ``d``."""
    raw = raw_stream(seed, d, count)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


@lru_cache(maxsize=16)
def colex_tables(n: int):
    """Index arrays for the full complex on ``n`` vertices, in colex order.

    Returns ``(edges, triangles, tri_edges)``: edge endpoints ``(a, b)``,
    triangle vertices ``(a, b, c)`` and, per triangle, the colex ranks of its
    three edges.  Arrays are read-only and cached.
    """
    b_idx, a_idx = [], []
    for b in range(n):
        for a in range(b):
            a_idx.append(a)
            b_idx.append(b)
    edges = np.array([a_idx, b_idx], dtype=np.int64).T.reshape(-1, 2)
    tris = []
    for c in range(n):
        for b in range(c):
            for a in range(b):
                tris.append((a, b, c))
    tris = np.array(tris, dtype=np.int64).reshape(-1, 3)
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]

    def erank(x, y):
        return y * (y - 1) // 2 + x

    tri_edges = np.stack([erank(a, b), erank(a, c), erank(b, c)], axis=1)
    for arr in (edges, tris, tri_edges):
        arr.setflags(write=False)
    return edges, tris, tri_edges
