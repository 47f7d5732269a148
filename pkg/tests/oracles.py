"""Slow, obviously-correct reference implementations used only by the tests.

Nothing here imports booklab; colorings are plain sets of blue pairs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

M64 = (1 << 64) - 1


def splitmix64(seed: int):
    state = seed & M64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
        yield z ^ (z >> 31)


def random_blue_pairs(n: int, p: Fraction, seed: int) -> set[frozenset]:
    gen = splitmix64(seed)
    out = set()
    for i in range(n):
        for j in range(i + 1, n):
            if Fraction(next(gen), 1 << 64) < p:
                out.add(frozenset((i, j)))
    return out


def is_blue(blue: set, u: int, v: int) -> bool:
    return frozenset((u, v)) in blue


def mono(blue: set, u: int, v: int, want_blue: bool) -> bool:
    return is_blue(blue, u, v) == want_blue


def cliques(n: int, blue: set, k: int, want_blue: bool):
    for q in itertools.combinations(range(n), k):
        if all(mono(blue, a, b, want_blue) for a, b in itertools.combinations(q, 2)):
            yield q


def ext(n: int, blue: set, q, want_blue: bool) -> int:
    return sum(1 for v in range(n) if v not in q and all(mono(blue, v, a, want_blue) for a in q))


def page_histogram(n, blue, k, want_blue) -> dict[int, int]:
    h: dict[int, int] = {}
    for q in cliques(n, blue, k, want_blue):
        e = ext(n, blue, q, want_blue)
        h[e] = h.get(e, 0) + 1
    return h


def k2_minus_edge(n, blue, k) -> int:
    """Blue K_{k+2} minus an edge: pick the missing pair {a, b} and a blue K_k
    joined to both; the a-b edge itself may have either color."""
    total = 0
    for a, b in itertools.combinations(range(n), 2):
        rest = [v for v in range(n) if v not in (a, b) and is_blue(blue, v, a) and is_blue(blue, v, b)]
        for q in itertools.combinations(rest, k):
            if all(is_blue(blue, x, y) for x, y in itertools.combinations(q, 2)):
                total += 1
    return total


def identity_sides(n, blue, k, p: Fraction):
    hist = page_histogram(n, blue, k, True)
    target = p**k * n
    direct = sum(m * (h - target) ** 2 for h, m in hist.items())
    bk = sum(hist.values())
    bk1 = sum(1 for _ in cliques(n, blue, k + 1, True))
    ident = 2 * k2_minus_edge(n, blue, k) + (1 - 2 * target) * (k + 1) * bk1 + p ** (2 * k) * n**2 * bk
    return direct, ident


def max_quasi_deviation(n, blue, p: Fraction) -> Fraction:
    """Max over all 3^n disjoint (X, Y) of |e_B(X, Y) - p|X||Y||."""
    best = Fraction(0)
    for assign in itertools.product(range(3), repeat=n):
        X = [v for v in range(n) if assign[v] == 1]
        Y = [v for v in range(n) if assign[v] == 2]
        e = sum(1 for x in X for y in Y if is_blue(blue, x, y))
        best = max(best, abs(e - p * len(X) * len(Y)))
    return best


def has_book(n, blue, k, size, want_blue) -> bool:
    return any(ext(n, blue, q, want_blue) >= size for q in cliques(n, blue, k, want_blue))


def arrows(N: int, k: int, m: int, nb: int) -> bool:
    """Every coloring of K_N has a red B_m^(k) or a blue B_nb^(k); 2^C(N,2) colorings."""
    pairs = [frozenset(e) for e in itertools.combinations(range(N), 2)]
    for bits in range(1 << len(pairs)):
        blue = {e for i, e in enumerate(pairs) if bits >> i & 1}
        if not has_book(N, blue, k, m, False) and not has_book(N, blue, k, nb, True):
            return False
    return True


def balanced_partitions(n: int, k: int):
    sizes = [n // k + (1 if i < n % k else 0) for i in range(k)]
    seen = set()
    for perm in itertools.permutations(range(n)):
        parts, i = [], 0
        for s in sizes:
            parts.append(frozenset(perm[i:i + s]))
            i += s
        key = frozenset(parts)
        if key not in seen:
            seen.add(key)
            yield parts


def kpartite_distance(n, blue, k) -> int:
    best = None
    for parts in balanced_partitions(n, k):
        lab = {v: i for i, P in enumerate(parts) for v in P}
        cost = sum(1 for u, v in itertools.combinations(range(n), 2)
                   if (lab[u] == lab[v]) != is_blue(blue, u, v))
        best = cost if best is None else min(best, cost)
    return best


def max_regularity_gap(n, blue, X, Y, eps: Fraction, want_blue: bool) -> Fraction:
    def d(A, B):
        return Fraction(sum(1 for a in A for b in B if a != b and mono(blue, a, b, want_blue)),
                        len(A) * len(B))

    base = d(X, Y)
    best = Fraction(0)
    for r in range(1, len(X) + 1):
        if r < eps * len(X):
            continue
        for A in itertools.combinations(X, r):
            for s in range(1, len(Y) + 1):
                if s < eps * len(Y):
                    continue
                for B in itertools.combinations(Y, s):
                    best = max(best, abs(d(A, B) - base))
    return best

