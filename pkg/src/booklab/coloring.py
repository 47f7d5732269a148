"""Immutable red/blue colorings of complete graphs, stored as per-vertex bitsets.

Vertex ``v``'s blue neighborhood is the Python integer ``blue[v]`` whose bit
``u`` is set iff edge ``{u, v}`` is blue. Red is the complement on distinct
pairs. Edge counts between vertex sets follow the ordered-pair convention:
``e(X, Y)`` counts pairs ``(x, y)`` in ``X x Y`` with ``x != y``, so ``X`` and
``Y`` may overlap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, FormatError


class Color(enum.Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def opposite(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED

    @classmethod
    def parse(cls, text: str) -> "Color":
        try:
            return cls(text.lower())
        except ValueError:
            raise DomainError(f"unknown color {text!r}; expected 'red' or 'blue'") from None


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    if mask.bit_count() > 64:
        s = bin(mask)[:1:-1]
        yield from (i for i, ch in enumerate(s) if ch == "1")
        return
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class VertexSet:
    """A set of vertices held as a bitmask."""

    mask: int = 0

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "VertexSet":
        m = 0
        for v in vertices:
            if v < 0:
                raise DomainError(f"negative vertex {v}")
            m |= 1 << v
        return cls(m)

    @classmethod
    def range(cls, start: int, stop: int) -> "VertexSet":
        if stop <= start:
            return cls(0)
        return cls(((1 << (stop - start)) - 1) << start)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, v: int) -> bool:
        return v >= 0 and bool(self.mask >> v & 1)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & other.mask)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask | other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & ~other.mask)

    def isdisjoint(self, other: "VertexSet") -> bool:
        return not (self.mask & other.mask)

    def sorted(self) -> list[int]:
        return list(iter_bits(self.mask))

    def __repr__(self) -> str:
        return f"VertexSet({self.sorted()})"


def as_vertex_set(x) -> VertexSet:
    if isinstance(x, VertexSet):
        return x
    return VertexSet.of(x)


@dataclass(frozen=True, eq=False)
class TwoColoring:
    n: int
    blue: tuple[int, ...]
    _full: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("vertex count must be at least 1")
        if len(self.blue) != self.n:
            raise DomainError("need one bitset row per vertex")
        object.__setattr__(self, "_full", (1 << self.n) - 1)
        for v, row in enumerate(self.blue):
            if row >> v & 1 or row & ~self._full:
                raise DomainError(f"row {v} has bits outside [0, n) \\ {{{v}}}")
            for u in iter_bits(row):
                if not self.blue[u] >> v & 1:
                    raise DomainError(f"asymmetric edge ({u}, {v})")

    @classmethod
    def _trusted(cls, n: int, rows: Sequence[int]) -> "TwoColoring":
        """Constructor for builders that already guarantee symmetry."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "blue", tuple(rows))
        object.__setattr__(obj, "_full", (1 << n) - 1)
        return obj

    @classmethod
    def from_matrix(cls, matrix) -> "TwoColoring":
        """Build from a symmetric boolean blue-adjacency matrix (diagonal ignored)."""
        a = np.asarray(matrix, dtype=bool).copy()
        n = a.shape[0]
        np.fill_diagonal(a, False)
        if a.shape != (n, n) or not np.array_equal(a, a.T):
            raise DomainError("blue adjacency matrix must be square and symmetric")
        packed = np.packbits(a, axis=1, bitorder="little")
        rows = [int.from_bytes(r.tobytes(), "little") for r in packed]
        return cls._trusted(n, rows)

    @property
    def full(self) -> int:
        return self._full

    def row(self, v: int, color: Color) -> int:
        if color is Color.BLUE:
            return self.blue[v]
        return self._full & ~self.blue[v] & ~(1 << v)

    def rows(self, color: Color) -> tuple[int, ...]:
        if color is Color.BLUE:
            return self.blue
        return self.red_rows

    @cached_property
    def red_rows(self) -> tuple[int, ...]:
        return tuple(self._full & ~b & ~(1 << v) for v, b in enumerate(self.blue))

    def is_blue(self, u: int, v: int) -> bool:
        return bool(self.blue[u] >> v & 1)

    def color_of(self, u: int, v: int) -> Color:
        if u == v:
            raise DomainError("no edge from a vertex to itself")
        return Color.BLUE if self.is_blue(u, v) else Color.RED

    def blue_edge_count(self) -> int:
        return sum(b.bit_count() for b in self.blue) // 2

    def red_edge_count(self) -> int:
        return self.n * (self.n - 1) // 2 - self.blue_edge_count()

    def blue_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.blue[u] >> (u + 1) << (u + 1))]

    def swapped(self) -> "TwoColoring":
        """The coloring with red and blue interchanged."""
        return TwoColoring._trusted(self.n, self.red_rows)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Blue adjacency as a read-only boolean matrix."""
        nbytes = (self.n + 7) // 8
        buf = b"".join(r.to_bytes(nbytes, "little") for r in self.blue)
        bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(self.n, nbytes),
                             axis=1, bitorder="little")[:, : self.n]
        m = bits.astype(bool)
        m.setflags(write=False)
        return m

    def __eq__(self, other) -> bool:
        return isinstance(other, TwoColoring) and self.n == other.n and self.blue == other.blue

    def __hash__(self) -> int:
        return hash((self.n, self.blue))

    def __repr__(self) -> str:
        return f"TwoColoring(n={self.n}, blue_edges={self.blue_edge_count()})"


def build(n: int, blue_edges: Iterable[tuple[int, int]]) -> TwoColoring:
    if n < 1:
        raise DomainError("vertex count must be at least 1")
    rows = [0] * n
    for u, v in blue_edges:
        if not (0 <= u < n and 0 <= v < n):
            raise DomainError(f"vertex out of range in pair ({u}, {v})")
        if u == v:
            raise DomainError(f"self-loop pair ({u}, {v})")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return TwoColoring._trusted(n, rows)


def _check_vertex(c: TwoColoring, v: int) -> None:
    if not 0 <= v < c.n:
        raise DomainError(f"vertex {v} out of range [0, {c.n})")


def _check_set(c: TwoColoring, s: VertexSet) -> None:
    if s.mask & ~c.full:
        raise DomainError(f"vertex set contains vertices >= n = {c.n}")


def neighbors(c: TwoColoring, v: int, color: Color) -> VertexSet:
    _check_vertex(c, v)
    return VertexSet(c.row(v, color))


def pair_count(c: TwoColoring, X, Y, color: Color) -> int:
    """Ordered pairs (x, y) in X x Y with x != y whose edge has ``color``."""
    X, Y = as_vertex_set(X), as_vertex_set(Y)
    _check_set(c, X)
    _check_set(c, Y)
    rows = c.rows(color)
    y = Y.mask
    return sum((rows[x] & y).bit_count() for x in X)


def density(c: TwoColoring, X, Y, color: Color) -> Fraction:
    X, Y = as_vertex_set(X), as_vertex_set(Y)
    if not X or not Y:
        raise DomainError("density needs nonempty X and Y")
    return Fraction(pair_count(c, X, Y, color), len(X) * len(Y))


# -- kcg v1 persistence -----------------------------------------------------

KCG_HEADER = "kcg 1"


def dumps(c: TwoColoring) -> str:
    m = c.matrix
    lines = [KCG_HEADER, str(c.n)]
    for i in range(c.n - 1):
        lines.append((m[i, i + 1:].astype(np.uint8) + ord("0")).tobytes().decode("ascii"))
    return "\n".join(lines) + "\n"


def loads(text: str) -> TwoColoring:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != KCG_HEADER:
        raise FormatError("malformed header: expected 'kcg 1'")
    if len(lines) < 2 or not lines[1].isdigit():
        raise FormatError("malformed header: missing decimal vertex count")
    n = int(lines[1])
    if n < 1:
        raise FormatError("vertex count must be at least 1")
    body = lines[2:]
    if len(body) > n - 1:
        raise FormatError(f"row length mismatch: {len(body)} rows for n = {n}")
    m = np.zeros((n, n), dtype=bool)
    for i in range(n - 1):
        line = body[i] if i < len(body) else ""
        if len(line) != n - 1 - i:
            raise FormatError(f"row length mismatch at row {i + 1}: "
                              f"expected {n - 1 - i}, got {len(line)}")
        if line.strip("01"):
            raise FormatError(f"row {i + 1} contains characters other than 0/1")
        m[i, i + 1:] = np.frombuffer(line.encode("ascii"), dtype=np.uint8) == ord("1")
    return TwoColoring.from_matrix(m | m.T)


def save(c: TwoColoring, path) -> None:
    Path(path).write_bytes(dumps(c).encode("ascii"))


def load(path) -> TwoColoring:
    return loads(Path(path).read_bytes().decode("ascii"))
