"""Extremal and random colorings, and the two lower bounds they realise."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coloring import TwoColoring, VertexSet
from .errors import DomainError
from .rng import splitmix64_block

_CHUNK = 1 << 22


@dataclass(frozen=True)
class Partition:
    parts: tuple[VertexSet, ...]

    def __post_init__(self):
        seen = 0
        for p in self.parts:
            if p.mask & seen:
                raise DomainError("partition parts overlap")
            seen |= p.mask

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    def covers(self, n: int) -> bool:
        return sum(p.mask for p in self.parts) == (1 << n) - 1

    def sizes(self) -> list[int]:
        return [len(p) for p in self.parts]

    def is_balanced(self) -> bool:
        s = self.sizes()
        return max(s) - min(s) <= 1

    def labels(self, n: int) -> np.ndarray:
        lab = np.full(n, -1, dtype=np.int64)
        for i, p in enumerate(self.parts):
            lab[p.sorted()] = i
        return lab

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        labels = list(labels)
        k = max(labels) + 1
        return cls(tuple(VertexSet.of(v for v, l in enumerate(labels) if l == i) for i in range(k)))


def balanced_kpartite(k: int, part_size: int) -> tuple[TwoColoring, Partition]:
    """Blue inside each of ``k`` contiguous blocks, red between blocks."""
    if k < 2:
        raise DomainError("k must be at least 2")
    if part_size < 1:
        raise DomainError("part_size must be at least 1")
    n = k * part_size
    parts = tuple(VertexSet.range(i * part_size, (i + 1) * part_size) for i in range(k))
    rows = []
    for p in parts:
        for v in p:
            rows.append(p.mask & ~(1 << v))
    return TwoColoring._trusted(n, rows), Partition(parts)


def _as_probability(p) -> Fraction:
    if isinstance(p, float):
        p = Fraction(p)
    p = Fraction(p)
    if not 0 < p < 1:
        raise DomainError(f"p must lie strictly between 0 and 1, got {p}")
    return p


def random_coloring(n: int, p, seed: int) -> TwoColoring:
    """Seeded p-random coloring.

    Pairs (i, j), i < j, are visited lexicographically and consume one
    SplitMix64 draw each; the edge is blue iff ``draw / 2**64 < p``, decided
    exactly in integer arithmetic.
    """
    if n < 1:
        raise DomainError("vertex count must be at least 1")
    p = _as_probability(p)
    # draw < p * 2^64  <=>  draw <= ceil(p * 2^64) - 1
    cutoff = -((-p.numerator << 64) // p.denominator) - 1
    m = np.zeros((n, n), dtype=bool)
    iu = np.triu_indices(n, 1)
    total = len(iu[0])
    for start in range(0, total, _CHUNK):
        count = min(_CHUNK, total - start)
        draws = splitmix64_block(seed, start, count)
        m[iu[0][start:start + count], iu[1][start:start + count]] = draws <= np.uint64(cutoff)
    return TwoColoring.from_matrix(m | m.T)


def goodness_bound(k: int, n: int) -> int:
    """k(n + k - 1) + 1, witnessed by :func:`balanced_kpartite` with parts of size n + k - 1."""
    if k < 2 or n < 1:
        raise DomainError("need k >= 2 and n >= 1")
    return k * (n + k - 1) + 1


def random_bound(c, k: int, n: int) -> float:
    """(c^(1/k) + 1)^k * n, the leading term of the random-coloring lower bound."""
    if k < 2 or n < 1:
        raise DomainError("need k >= 2 and n >= 1")
    if not 0 < c <= 1:
        raise DomainError("c must lie in (0, 1]")
    return (float(c) ** (1.0 / k) + 1.0) ** k * n


def dominant_bound(c, k: int, n: int) -> dict:
    gb = goodness_bound(k, n)
    rb = random_bound(c, k, n)
    return {"goodness": gb, "random": rb, "dominant": "random" if rb > gb else "goodness",
            "p": 1.0 / (float(c) ** (1.0 / k) + 1.0),
            "crossover_c_leading_order": (math.log(k) / k) ** k}
