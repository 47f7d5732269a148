"""Exact arrowing decisions for tiny book-Ramsey instances, and stochastic
witness search for lower bounds.

The exact search grows book-free colorings one vertex at a time. Being
book-free is hereditary, so every book-free coloring of K_{j+1} restricts to
one of K_j; keeping a single representative per isomorphism class at each
level therefore loses nothing. Canonical certificates come from nauty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import pynauty

from . import books
from .coloring import Color, TwoColoring, iter_bits
from .errors import DomainError, InconclusiveError
from .rng import SplitMix64, derive_seed

DEFAULT_NODE_CAP = 10**7


@dataclass(frozen=True)
class ArrowQuery:
    """Does every coloring of K_N contain a red B_m^(k) or a blue B_n^(k)?"""

    N: int
    k: int
    m: int
    n: int

    def __post_init__(self):
        if self.k < 2:
            raise DomainError("k must be at least 2")
        if self.m < 1 or self.n < 1:
            raise DomainError("book sizes m and n must be at least 1")
        if self.m > self.n:
            raise DomainError("expected m <= n")
        if self.N < 1:
            raise DomainError("N must be at least 1")


@dataclass
class SearchStats:
    nodes: int = 0
    book_prunes: int = 0
    iso_prunes: int = 0
    level_sizes: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"nodes": self.nodes, "book_prunes": self.book_prunes,
                "iso_prunes": self.iso_prunes, "level_sizes": self.level_sizes}


@dataclass
class SearchResult:
    k: int
    m: int
    n: int
    lower: int
    upper: int | None
    witness: TwoColoring | None
    stats: SearchStats
    reason: str = ""

    @property
    def value(self) -> int | None:
        return self.lower if self.upper == self.lower else None

    def as_dict(self) -> dict:
        return {"k": self.k, "m": self.m, "n": self.n, "value": self.value,
                "lower": self.lower, "upper": self.upper,
                "witness_n": self.witness.n if self.witness else None,
                "reason": self.reason, "stats": self.stats.as_dict()}


def book_free(c: TwoColoring, k: int, m: int, n: int) -> bool:
    """No red K_k spine with >= m red pages and no blue one with >= n blue pages."""
    if c.n < k:
        return True
    return (books.spectrum(c, Color.RED, k).count_at_least(m) == 0
            and books.spectrum(c, Color.BLUE, k).count_at_least(n) == 0)


def certificate(n: int, blue: tuple[int, ...]) -> bytes:
    adj = {v: list(iter_bits(blue[v])) for v in range(n)}
    return pynauty.certificate(pynauty.Graph(n, adjacency_dict=adj))


def _new_book(blue: list[int], j: int, k: int, m: int, n: int) -> bool:
    """Whether vertex j completes a forbidden book; only spines inside
    N_c(j) + j can have gained a page or appeared."""
    full = (1 << (j + 1)) - 1
    red = [full & ~b & ~(1 << v) for v, b in enumerate(blue)]
    for rows, thr in ((red, m), (blue, n)):
        allowed = rows[j] | (1 << j)
        for _, common in books.iter_spines(rows, k, allowed):
            if common.bit_count() >= thr:
                return True
    return False


def _grow(q: ArrowQuery, node_cap: int):
    """Yield (size, representatives) for sizes 1..N, stopping early once a
    level is empty."""
    stats = SearchStats()
    level = {certificate(1, (0,)): (0,)}
    stats.level_sizes.append(1)
    yield 1, level, stats
    for j in range(1, q.N):
        nxt: dict[bytes, tuple[int, ...]] = {}
        for rows in level.values():
            for nb in range(1 << j):
                stats.nodes += 1
                if stats.nodes > node_cap:
                    raise InconclusiveError(
                        f"node cap {node_cap} exceeded while extending to {j + 1} vertices",
                        stats.as_dict())
                ext = [r | ((nb >> u & 1) << j) for u, r in enumerate(rows)] + [nb]
                if _new_book(ext, j, q.k, q.m, q.n):
                    stats.book_prunes += 1
                    continue
                cert = certificate(j + 1, ext)
                if cert in nxt:
                    stats.iso_prunes += 1
                else:
                    nxt[cert] = tuple(ext)
        level = nxt
        stats.level_sizes.append(len(level))
        yield j + 1, level, stats
        if not level:
            return


def decide(q: ArrowQuery, node_cap: int = DEFAULT_NODE_CAP):
    """Return ``(arrows, witness, stats)``; the witness is a book-free
    coloring of K_N when ``arrows`` is false."""
    for size, level, stats in _grow(q, node_cap):
        if not level:
            return True, None, stats
    rows = next(iter(level.values()))
    witness = TwoColoring._trusted(q.N, rows)
    assert book_free(witness, q.k, q.m, q.n)
    return False, witness, stats


def arrow(q: ArrowQuery, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    return decide(q, node_cap)[0]


def ramsey_number(k: int, m: int, n: int, N_cap: int, node_cap: int = DEFAULT_NODE_CAP) -> SearchResult:
    """Smallest N <= N_cap with every coloring of K_N arrowing, or bounds."""
    q = ArrowQuery(N_cap, k, m, n)
    witness, lower = None, 1
    stats = SearchStats()
    try:
        for size, level, stats in _grow(q, node_cap):
            if not level:
                return SearchResult(k, m, n, size, size, witness, stats, "exact")
            witness = TwoColoring._trusted(size, next(iter(level.values())))
            lower = size + 1
    except InconclusiveError as exc:
        return SearchResult(k, m, n, lower, None, witness, stats, str(exc))
    return SearchResult(k, m, n, lower, None, witness, stats, f"N_cap {N_cap} reached")


# -- simulated annealing -----------------------------------------------------

def _excess(rows, k: int, size: int, thr: int) -> int:
    hist = books._histogram(rows, k, size)
    return sum(mult * (h - thr + 1) for h, mult in hist.items() if h >= thr)


def book_excess(c: TwoColoring, k: int, m: int, n: int) -> int:
    """Pages beyond the allowed maximum, summed over offending spines of both colors."""
    if c.n < k:
        return 0
    return _excess(c.red_rows, k, c.n, m) + _excess(c.blue, k, c.n, n)


def witness_search(N: int, k: int, m: int, n: int, budget: int, seed: int,
                   init: TwoColoring | None = None, *, t_start: float = 2.0,
                   t_end: float = 0.05) -> TwoColoring | None:
    """Simulated annealing over single edge flips; returns a verified
    book-free coloring of K_N, or None when the budget runs out."""
    ArrowQuery(N, k, m, n)
    if budget < 1:
        raise DomainError("budget must be positive")
    rng = SplitMix64(derive_seed(seed, 0))
    if init is not None:
        if init.n != N:
            raise DomainError("initial coloring has the wrong vertex count")
        blue = list(init.blue)
    else:
        blue = [0] * N
        for u in range(N):
            for v in range(u + 1, N):
                if rng.next_u64() >> 63:
                    blue[u] |= 1 << v
                    blue[v] |= 1 << u
    full = (1 << N) - 1

    def score(b):
        red = [full & ~r & ~(1 << v) for v, r in enumerate(b)]
        return 0 if N < k else _excess(red, k, N, m) + _excess(b, k, N, n)

    cur = score(blue)
    pairs = N * (N - 1) // 2
    if pairs:
        cool = (t_end / t_start) ** (1.0 / max(1, budget))
        t = t_start
        for _ in range(budget):
            if cur == 0:
                break
            idx = rng.randbelow(pairs)
            u = next(i for i in range(N) if idx < (i + 1) * N - (i + 1) * (i + 2) // 2)
            v = idx - (u * N - u * (u + 1) // 2) + u + 1
            blue[u] ^= 1 << v
            blue[v] ^= 1 << u
            new = score(blue)
            if new <= cur or rng.random() < math.exp((cur - new) / t):
                cur = new
            else:
                blue[u] ^= 1 << v
                blue[v] ^= 1 << u
            t *= cool
    if cur:
        return None
    c = TwoColoring._trusted(N, blue)
    if not book_free(c, k, m, n):
        raise AssertionError("annealing produced an unverified witness")
    return c
