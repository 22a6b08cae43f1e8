"""Open lattice hexagons inside ``V_k``.

A hexagon is walked counter-clockwise from ``corner``; side ``j`` runs
``sides[j]`` unit steps along ``DIRECTIONS[j]``.  Equivalently it is the
region cut out by three strips in axial coordinates::

    amin <= a <= amax,  bmin <= b <= bmax,  cmin <= a + b <= cmax

Side ``j`` lies on the line given by ``bounds()[j]`` in the order
``(bmin, amax, cmax, bmax, amin, cmin)``.  Zero-length sides are allowed
(they come out of :func:`add_row` with ``t = 1``) but the open region must
contain at least one lattice vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .subdivision import DIRECTIONS, hex_lattice, side_length

# index into bounds() -> value of that bound on the boundary of V_k, per unit s
_VK_SIGN = (-1, 1, 1, 1, -1, -1)


class HexagonError(ValueError):
    pass


@lru_cache(maxsize=None)
def _lattice_sums(s: int):
    """Per dimension, arrays of summed axial coordinates of each lattice cell."""
    lat = hex_lattice(s)
    out = []
    for cells in (tuple((p,) for p in lat.points), lat.edges, lat.triangles):
        arr = np.array(cells, dtype=np.int64)  # (n, d+1, 2)
        out.append((arr[:, :, 0].sum(axis=1), arr[:, :, 1].sum(axis=1)))
    return out


def _tighten(amin, amax, bmin, bmax, cmin, cmax):
    while True:
        new = (max(amin, cmin - bmax), min(amax, cmax - bmin),
               max(bmin, cmin - amax), min(bmax, cmax - amin),
               max(cmin, amin + bmin), min(cmax, amax + bmax))
        if new == (amin, amax, bmin, bmax, cmin, cmax):
            return new
        amin, amax, bmin, bmax, cmin, cmax = new


@dataclass(frozen=True)
class Hexagon:
    k: int
    corner: tuple[int, int]
    sides: tuple[int, int, int, int, int, int]

    def __post_init__(self):
        l0, l1, l2, l3, l4, l5 = self.sides
        if len(self.sides) != 6 or min(self.sides) < 0:
            raise HexagonError(f"side lengths must be six non-negative ints: {self.sides}")
        if l0 + l5 != l2 + l3 or l1 + l2 != l4 + l5:
            raise HexagonError(f"sides {self.sides} do not close up")
        s = side_length(self.k)
        if any(abs(x) > s for x in self.bounds()):
            raise HexagonError(f"hexagon {self} is not contained in V_{self.k}")
        if self.open_cells()[0] == 0:
            raise HexagonError(f"hexagon {self.sides} has no interior vertex")

    @classmethod
    def from_bounds(cls, k, amin, amax, bmin, bmax, cmin, cmax) -> "Hexagon":
        amin, amax, bmin, bmax, cmin, cmax = _tighten(amin, amax, bmin, bmax, cmin, cmax)
        sides = (amax - cmin + bmin, cmax - amax - bmin, amax - cmax + bmax,
                 cmax - bmax - amin, bmax - cmin + amin, cmin - bmin - amin)
        return cls(k, (cmin - bmin, bmin), sides)

    @classmethod
    def regular(cls, k: int, side: int, center=(0, 0)) -> "Hexagon":
        a, b = center
        return cls.from_bounds(k, a - side, a + side, b - side, b + side,
                               a + b - side, a + b + side)

    @classmethod
    def full(cls, k: int) -> "Hexagon":
        return cls.regular(k, side_length(k))

    def bounds(self) -> tuple[int, int, int, int, int, int]:
        """``(bmin, amax, cmax, bmax, amin, cmin)``: the line of each side."""
        l0, l1, l2, l3, l4, l5 = self.sides
        a0, b0 = self.corner
        amax = a0 + l0
        return (b0, amax, amax + b0 + l1, b0 + l1 + l2, amax - l2 - l3, a0 + b0)

    def strips(self):
        bmin, amax, cmax, bmax, amin, cmin = self.bounds()
        return amin, amax, bmin, bmax, cmin, cmax

    def vertices(self) -> list[tuple[int, int]]:
        out = [self.corner]
        a, b = self.corner
        for (da, db), ell in zip(DIRECTIONS, self.sides):
            a, b = a + da * ell, b + db * ell
            out.append((a, b))
        return out[:-1]

    def translate(self, da: int, db: int) -> "Hexagon":
        return Hexagon(self.k, (self.corner[0] + da, self.corner[1] + db), self.sides)

    @property
    def perimeter(self) -> int:
        return sum(self.sides)

    @cached_property
    def _cells(self):
        """Direct lattice count of open vertices, edges, triangles, and of
        boundary edges.  A cell is tested through the sum of its corners,
        which keeps the strict/non-strict comparisons exact."""
        amin, amax, bmin, bmax, cmin, cmax = self.strips()
        sums = _lattice_sums(side_length(self.k))

        def count(d, strict):
            a, b = sums[d]
            c = a + b
            sc = d + 1
            if strict:
                ok = ((sc * amin < a) & (a < sc * amax) & (sc * bmin < b) & (b < sc * bmax)
                      & (sc * cmin < c) & (c < sc * cmax))
            else:
                ok = ((sc * amin <= a) & (a <= sc * amax) & (sc * bmin <= b) & (b <= sc * bmax)
                      & (sc * cmin <= c) & (c <= sc * cmax))
            return int(ok.sum())

        f1 = count(1, True)
        return count(0, True), f1, count(2, True), count(1, False) - f1

    def open_cells(self) -> tuple[int, int, int, int]:
        return self._cells

    def longest_side(self) -> int:
        """Index of the longest side (lowest index on ties)."""
        t = max(self.sides)
        return self.sides.index(t)

    def side_on_boundary(self, j: int) -> bool:
        """True when side ``j`` (of positive length) lies in the boundary of ``V_k``."""
        if self.sides[j] == 0:
            return False
        return self.bounds()[j] == _VK_SIGN[j] * side_length(self.k)


def hexagon_fvector(h: Hexagon) -> tuple[int, int, int, int]:
    """``(f0, f1, f2, b)`` counted cell by cell; ``b`` is the number of
    boundary edges."""
    return h.open_cells()


def isoperimetric_check(h: Hexagon, tol: float = 1e-9) -> bool:
    """Unit-triangle area against the planar isoperimetric bound:
    ``f2 <= b**2 / (sqrt(3) * pi)``."""
    _, _, f2, b = hexagon_fvector(h)
    return f2 <= b * b / (math.sqrt(3) * math.pi) + tol


def _translations(radius: int):
    yield (0, 0)
    for r in range(1, radius + 1):
        for j, (da, db) in enumerate(DIRECTIONS):
            ea, eb = DIRECTIONS[(j + 2) % 6]
            for step in range(r):
                yield (r * da + step * ea, r * db + step * eb)


def shift_longest_side_inward(h: Hexagon) -> Hexagon:
    """A translate of ``h`` inside ``V_k`` whose longest side avoids the
    boundary of ``V_k``; ``h`` itself when that already holds."""
    if h == Hexagon.full(h.k):
        raise HexagonError("V_k itself cannot be shifted")
    j = h.longest_side()
    s = side_length(h.k)
    for da, db in _translations(2 * s):
        try:
            g = h.translate(da, db)
        except HexagonError:
            continue
        if not g.side_on_boundary(j):
            return g
    raise HexagonError(f"no admissible translate of {h}")


def add_row(h: Hexagon) -> Hexagon:
    """Grow ``h`` by one full row of triangles along its longest side.

    The side moves one lattice line outward: it shrinks by one and its two
    neighbours grow by one.
    """
    j = h.longest_side()
    if h.side_on_boundary(j):
        raise HexagonError("row would exit V_k: longest side lies on its boundary")
    b = list(h.bounds())
    b[j] += 1 if _VK_SIGN[j] > 0 else -1
    bmin, amax, cmax, bmax, amin, cmin = b
    try:
        return Hexagon.from_bounds(h.k, amin, amax, bmin, bmax, cmin, cmax)
    except HexagonError as exc:
        raise HexagonError(f"row would exit V_k: {exc}") from None


def enumerate_hexagons(k: int, min_side: int = 1):
    """Every hexagon in ``V_k`` with all sides at least ``min_side``."""
    s = side_length(k)
    span = range(min_side, 2 * s + 1)
    for l0 in span:
        for l1 in span:
            for l2 in span:
                for l3 in span:
                    l5 = l2 + l3 - l0
                    l4 = l1 + l2 - l5
                    if l5 < min_side or l4 < min_side:
                        continue
                    sides = (l0, l1, l2, l3, l4, l5)
                    # corner (a0, b0) with every bound in [-s, s]
                    for a0 in range(-s + l2 + l3 - l0, s - l0 + 1):
                        amax = a0 + l0
                        for b0 in range(-s, s + 1):
                            vals = (b0, amax + b0 + l1, b0 + l1 + l2, a0 + b0)
                            if all(-s <= v <= s for v in vals):
                                try:
                                    yield Hexagon(k, (a0, b0), sides)
                                except HexagonError:
                                    pass
