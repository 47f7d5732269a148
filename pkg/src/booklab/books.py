"""Exact enumeration of monochromatic spines, their pages, and book statistics.

Two independent counting routes live here on purpose. Spine enumeration walks
cliques in lexicographic order and records the size of each spine's common
neighborhood; :func:`count_cliques` uses pivoting over bitset intersections
and never looks at extensions. Identities that relate the two are therefore
genuine cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Iterator, Sequence

from .coloring import Color, TwoColoring, VertexSet, as_vertex_set, density, iter_bits
from .errors import DomainError, NoSpineError, PreconditionError

EXHAUSTIVE_TUPLE_CAP = 10**8


@dataclass(frozen=True)
class BookReport:
    color: Color
    k: int
    spine: tuple[int, ...]
    pages: int

    def as_dict(self) -> dict:
        return {"color": self.color.value, "k": self.k, "spine": list(self.spine), "pages": self.pages}


@dataclass
class Spectrum:
    """Histogram of page counts over every monochromatic K_k of one color."""

    color: Color
    k: int
    n: int
    histogram: dict[int, int] = field(default_factory=dict)

    @property
    def total_spines(self) -> int:
        return sum(self.histogram.values())

    @property
    def total_pages(self) -> int:
        return sum(h * m for h, m in self.histogram.items())

    @property
    def total_page_pairs(self) -> int:
        return sum(comb(h, 2) * m for h, m in self.histogram.items())

    def mean_pages(self) -> Fraction:
        if not self.total_spines:
            raise PreconditionError("empty spectrum has no mean")
        return Fraction(self.total_pages, self.total_spines)

    def count_at_least(self, threshold) -> int:
        return sum(m for h, m in self.histogram.items() if h >= threshold)

    def max_pages(self) -> int:
        return max(self.histogram) if self.histogram else 0

    def entries(self) -> list[dict]:
        return [{"color": self.color.value, "k": self.k, "pages": h, "spines": m}
                for h, m in sorted(self.histogram.items())]


def _check_k(c: TwoColoring, k: int) -> None:
    if not 1 <= k <= c.n:
        raise DomainError(f"k = {k} outside [1, n = {c.n}]")


def _above(v: int) -> int:
    return -1 << (v + 1)


def iter_spines(rows: Sequence[int], k: int, allowed: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield ``(spine, common)`` for each k-clique inside ``allowed``, lexicographically.

    ``common`` is the bitset of all vertices adjacent to every spine vertex.
    """
    full = (1 << len(rows)) - 1

    def rec(spine, cand, common):
        if len(spine) == k:
            yield spine, common
            return
        for v in iter_bits(cand):
            rv = rows[v]
            yield from rec(spine + (v,), cand & rv & _above(v), common & rv)

    yield from rec((), allowed, full)


def _histogram(rows: Sequence[int], k: int, n: int) -> dict[int, int]:
    hist = [0] * (n + 1)
    if k == 1:
        for r in rows:
            hist[r.bit_count()] += 1
    elif k == 2:
        for v in range(n):
            rv = rows[v]
            for u in iter_bits(rv & _above(v)):
                hist[(rv & rows[u]).bit_count()] += 1
    else:
        for _, common in iter_spines(rows, k, (1 << n) - 1):
            hist[common.bit_count()] += 1
    return {h: m for h, m in enumerate(hist) if m}


def spectrum(c: TwoColoring, color: Color, k: int) -> Spectrum:
    _check_k(c, k)
    return Spectrum(color, k, c.n, _histogram(c.rows(color), k, c.n))


def pivot_clique_count(rows: Sequence[int], allowed: int, k: int) -> int:
    """Number of k-cliques inside ``allowed`` via pivoting.

    Each leaf of the recursion holds a clique of "held" vertices plus a set of
    pivots that may be added freely, standing for C(pivots, k - held) cliques.
    """
    if k == 0:
        return 1

    def rec(P: int, held: int, piv: int) -> int:
        if held == k:
            return 1
        if held + piv + P.bit_count() < k:
            return 0
        if not P:
            return comb(piv, k - held)
        best, u = -1, -1
        for w in iter_bits(P):
            d = (rows[w] & P).bit_count()
            if d > best:
                best, u = d, w
        total = rec(P & rows[u], held, piv + 1)
        rest = P & ~rows[u] & ~(1 << u)
        remaining = P
        for v in iter_bits(rest):
            total += rec(remaining & rows[v], held + 1, piv)
            remaining &= ~(1 << v)
        return total

    return rec(allowed, 0, 0)


def count_cliques(c: TwoColoring, color: Color, k: int) -> int:
    _check_k(c, k)
    return pivot_clique_count(c.rows(color), c.full, k)


def count_k2_minus_edge(c: TwoColoring, color: Color, k: int) -> int:
    """Copies of K_{k+2} - e in ``color``: for every pair {a, b}, the k-cliques
    inside their common neighborhood (the pair itself may have either color)."""
    rows = c.rows(color)
    total = 0
    for a in range(c.n):
        ra = rows[a]
        for b in range(a + 1, c.n):
            common = ra & rows[b]
            if common.bit_count() >= k:
                total += pivot_clique_count(rows, common, k)
    return total


def _check_spine(c: TwoColoring, spine, color: Color) -> tuple[int, ...]:
    spine = tuple(sorted(spine))
    if len(set(spine)) != len(spine):
        raise DomainError("spine has repeated vertices")
    for v in spine:
        if not 0 <= v < c.n:
            raise DomainError(f"vertex {v} out of range")
    rows = c.rows(color)
    for i, u in enumerate(spine):
        for v in spine[i + 1:]:
            if not rows[u] >> v & 1:
                raise DomainError(f"spine is not a {color.value} clique: edge ({u}, {v})")
    return spine


def extensions(c: TwoColoring, spine, color: Color) -> VertexSet:
    spine = _check_spine(c, spine, color)
    rows = c.rows(color)
    common = c.full
    for v in spine:
        common &= rows[v]
    return VertexSet(common)


def max_book(c: TwoColoring, color: Color, k: int) -> BookReport:
    """Spine with the most pages; ties go to the lexicographically smallest spine."""
    _check_k(c, k)
    rows = c.rows(color)
    best_spine, best = None, -1
    if k == 2:
        for v in range(c.n):
            rv = rows[v]
            for u in iter_bits(rv & _above(v)):
                h = (rv & rows[u]).bit_count()
                if h > best:
                    best_spine, best = (v, u), h
    else:
        for spine, common in iter_spines(rows, k, c.full):
            h = common.bit_count()
            if h > best:
                best_spine, best = spine, h
    if best_spine is None:
        raise NoSpineError(f"no {color.value} K_{k} in this coloring")
    return BookReport(color, k, best_spine, best)


@dataclass
class ManyBooksReport:
    k: int
    n: int
    gamma: Fraction
    variant: bool
    c: Fraction | None
    p: Fraction | None
    red_threshold: Fraction
    blue_threshold: Fraction
    red_qualifying: int
    blue_qualifying: int
    needed: Fraction
    verdict: bool
    alternative: dict | None = None

    def as_dict(self) -> dict:
        d = {
            "k": self.k, "N": self.n, "gamma": self.gamma, "variant": self.variant,
            "c": self.c, "p": self.p,
            "red_threshold": self.red_threshold, "blue_threshold": self.blue_threshold,
            "red_qualifying": self.red_qualifying, "blue_qualifying": self.blue_qualifying,
            "needed": self.needed, "verdict": self.verdict,
        }
        if self.alternative is not None:
            d["alternative"] = self.alternative
        return d


def _qualifying(red: Spectrum, blue: Spectrum, red_frac: Fraction, blue_frac: Fraction, n: int):
    red_thr, blue_thr = red_frac * n, blue_frac * n
    return red_thr, blue_thr, red.count_at_least(red_thr), blue.count_at_least(blue_thr)


def many_books(c: TwoColoring, k: int, gamma, *, c_param=None, p=None) -> ManyBooksReport:
    """Decide whether the coloring has (c, gamma)-many books.

    With ``c_param`` the thresholds are (c/k + gamma)N red and (1/k + gamma)N
    blue. With ``p`` (the quasirandom-regime variant) they are
    ((1-p)^k + gamma)N and (p^k + gamma)N; the report then also carries the
    counts under the c = ((1-p)/p)^k normalization.
    """
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise DomainError("gamma must be positive")
    if (c_param is None) == (p is None):
        raise DomainError("give exactly one of c_param or p")
    _check_k(c, k)
    n = c.n
    red, blue = spectrum(c, Color.RED, k), spectrum(c, Color.BLUE, k)
    needed = gamma * n**k
    alt = None
    if p is None:
        cp = Fraction(c_param)
        if cp <= 0:
            raise DomainError("c must be positive")
        red_frac, blue_frac = cp / k + gamma, Fraction(1, k) + gamma
        pp = None
    else:
        pp = Fraction(p)
        if not 0 < pp < 1:
            raise DomainError("p must lie in (0, 1)")
        cp = ((1 - pp) / pp) ** k
        red_frac, blue_frac = (1 - pp) ** k + gamma, pp**k + gamma
        a_rt, a_bt, a_rq, a_bq = _qualifying(red, blue, cp / k + gamma, Fraction(1, k) + gamma, n)
        alt = {"normalization": "c/k and 1/k", "red_threshold": a_rt, "blue_threshold": a_bt,
               "red_qualifying": a_rq, "blue_qualifying": a_bq,
               "verdict": a_rq >= needed or a_bq >= needed}
    rt, bt, rq, bq = _qualifying(red, blue, red_frac, blue_frac, n)
    return ManyBooksReport(k, n, gamma, p is not None, cp, pp, rt, bt, rq, bq, needed,
                           rq >= needed or bq >= needed, alt)


def common_neighbor_tuples(c: TwoColoring, A, B, k: int, color: Color, zeta) -> int:
    """k-subsets of B whose members share at least zeta*|A| color-neighbors in A."""
    A, B = as_vertex_set(A), as_vertex_set(B)
    if not A.isdisjoint(B):
        raise DomainError("A and B must be disjoint")
    if not 1 <= k <= len(B):
        raise DomainError("need 1 <= k <= |B|")
    if comb(len(B), k) > EXHAUSTIVE_TUPLE_CAP:
        raise PreconditionError(f"C(|B|, k) = {comb(len(B), k)} exceeds the exhaustive cap")
    threshold = Fraction(zeta) * len(A)
    rows = c.rows(color)
    bs = B.sorted()

    def rec(start: int, depth: int, common: int) -> int:
        # supersets only shrink the common neighborhood
        if common.bit_count() < threshold:
            return 0
        if depth == k:
            return 1
        return sum(rec(i + 1, depth + 1, common & rows[bs[i]])
                   for i in range(start, len(bs) - (k - depth) + 1))

    return rec(0, 0, A.mask)


def markov_floor_check(s: Spectrum, xi, nu, kappa) -> bool:
    """At least (xi - nu) kappa N^k spines carry nu N pages or more.

    This always holds when the preconditions do; ``False`` means the
    spectrum itself is inconsistent.
    """
    xi, nu, kappa = Fraction(xi), Fraction(nu), Fraction(kappa)
    n, k = s.n, s.k
    if not 0 < nu < xi:
        raise PreconditionError("need 0 < nu < xi")
    if kappa <= 0:
        raise PreconditionError("kappa must be positive")
    if not s.total_spines:
        raise PreconditionError("spectrum is empty")
    if s.total_spines < kappa * n**k:
        raise PreconditionError("fewer than kappa N^k spines")
    if s.mean_pages() < xi * n:
        raise PreconditionError("mean page count below xi N")
    return s.count_at_least(nu * n) >= (xi - nu) * kappa * n**k


@dataclass
class CountingReport:
    exact: int
    density_product: Fraction
    predicted: Fraction
    low: Fraction
    high: Fraction
    contained: bool

    def as_dict(self) -> dict:
        return {"exact": self.exact, "density_product": self.density_product,
                "predicted": self.predicted, "low": self.low, "high": self.high,
                "contained": self.contained}


def labeled_clique_count(c: TwoColoring, parts: Sequence[VertexSet], color: Color) -> int:
    """Tuples (v_1..v_k), v_i in parts[i], pairwise joined in ``color``."""
    rows = c.rows(color)
    masks = [p.mask for p in parts]
    k = len(masks)

    def rec(i: int, allowed: int) -> int:
        cand = allowed & masks[i]
        if i == k - 1:
            return cand.bit_count()
        return sum(rec(i + 1, allowed & rows[v]) for v in iter_bits(cand))

    return rec(0, c.full)


def counting_report(c: TwoColoring, parts, color: Color, eps) -> CountingReport:
    parts = [as_vertex_set(p) for p in parts]
    if not parts or any(not p for p in parts):
        raise DomainError("parts must be nonempty")
    eps = Fraction(eps)
    k = len(parts)
    exact = labeled_clique_count(c, parts, color)
    dprod = prod((density(c, parts[i], parts[j], color)
                  for i in range(k) for j in range(i + 1, k)), start=Fraction(1))
    size = prod(len(p) for p in parts)
    slack = eps * comb(k, 2)
    low, high = (dprod - slack) * size, (dprod + slack) * size
    return CountingReport(exact, dprod, dprod * size, low, high, low <= exact <= high)
