"""Reading and writing the ``.s2c`` text format.

::

    s2c 1
    # comment
    2 0 1 2
    0 5

Each data line is ``<dim> <v0> ... <vdim>`` with strictly increasing ids.
The complex is the downward closure of the listed simplices.  Serialization
writes only maximal simplices, ordered by (dimension, vertices).
"""

from __future__ import annotations

from os import PathLike
from typing import TextIO

from .complex import ComplexError, SimplicialComplex2

HEADER = "s2c 1"


class S2CFormatError(ValueError):
    pass


def loads(text: str) -> SimplicialComplex2:
    lines = text.splitlines()
    body = iter(enumerate(lines, 1))
    for lineno, line in body:
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped != HEADER:
            raise S2CFormatError(f"line {lineno}: expected header {HEADER!r}")
        break
    else:
        raise S2CFormatError("missing header")
    simplices = []
    for lineno, line in body:
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        try:
            fields = [int(x) for x in stripped.split()]
        except ValueError:
            raise S2CFormatError(f"line {lineno}: non-integer field") from None
        d, vs = fields[0], fields[1:]
        if d not in (0, 1, 2) or len(vs) != d + 1:
            raise S2CFormatError(f"line {lineno}: bad simplex {stripped!r}")
        if any(a >= b for a, b in zip(vs, vs[1:])):
            raise S2CFormatError(f"line {lineno}: vertex ids must increase")
        simplices.append(tuple(vs))
    try:
        return SimplicialComplex2.from_simplices(simplices)
    except ComplexError as exc:
        raise S2CFormatError(str(exc)) from None


def dumps(c: SimplicialComplex2) -> str:
    out = [HEADER]
    for s in c.maximal_simplices():
        out.append(f"{len(s) - 1} " + " ".join(map(str, s)))
    return "\n".join(out) + "\n"


def load(path: str | PathLike) -> SimplicialComplex2:
    with open(path) as fh:
        return loads(fh.read())


def dump(c: SimplicialComplex2, dest: str | PathLike | TextIO) -> None:
    text = dumps(c)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)
