"""Quasirandomness diagnostics.

Searches here are sound in one direction only: a reported violation or
refutation always carries an explicit witness whose value is recomputed
exactly through :mod:`booklab.coloring`; the absence of one is a proof only
in the exhaustive modes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import books
from .coloring import Color, TwoColoring, VertexSet, as_vertex_set, density, pair_count
from .constructions import Partition
from .errors import DomainError, PreconditionError
from .rng import SplitMix64, derive_seed, splitmix64_block

QUASI_EXHAUSTIVE_MAX_N = 18
REGULARITY_EXHAUSTIVE_MAX = 12
IDENTITY_MAX_N = 60
IDENTITY_MAX_K = 5


def _fraction(x) -> Fraction:
    return Fraction(x) if not isinstance(x, Fraction) else x


def _chunks(n_items: int, workers: int) -> list[range]:
    step = max(1, math.ceil(n_items / workers))
    return [range(i, min(n_items, i + step)) for i in range(0, n_items, step)]


def _parallel(fn, args_list, workers: int):
    if workers <= 1 or len(args_list) <= 1:
        return [fn(*a) for a in args_list]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, *zip(*args_list)))


# -- (p, theta)-quasirandomness ---------------------------------------------

@dataclass
class QuasiReport:
    p: Fraction
    theta: Fraction
    n: int
    X: VertexSet
    Y: VertexSet
    deviation: Fraction
    method: str
    probes: int
    verdict: str

    @property
    def threshold(self) -> Fraction:
        return self.theta * self.n**2

    def as_dict(self) -> dict:
        return {"p": self.p, "theta": self.theta, "N": self.n, "method": self.method,
                "probes": self.probes, "X": self.X.sorted(), "Y": self.Y.sorted(),
                "deviation": self.deviation, "threshold": self.threshold,
                "verdict": self.verdict}


def blue_deviation(c: TwoColoring, X, Y, p) -> Fraction:
    """|e_B(X, Y) - p|X||Y|| in exact arithmetic."""
    X, Y = as_vertex_set(X), as_vertex_set(Y)
    return abs(pair_count(c, X, Y, Color.BLUE) - _fraction(p) * len(X) * len(Y))


def _check_quasi_args(p, theta) -> tuple[Fraction, Fraction]:
    p, theta = _fraction(p), _fraction(theta)
    if not 0 <= p <= 1:
        raise DomainError("p must lie in [0, 1]")
    if theta <= 0:
        raise DomainError("theta must be positive")
    return p, theta


def quasi_exhaustive(c: TwoColoring, p, theta) -> QuasiReport:
    """Exact maximum deviation over all disjoint (X, Y).

    For a fixed X each outside vertex contributes independently to
    e_B(X, Y) - p|X||Y|, so the best Y is read off directly and only the
    2^n choices of X are enumerated.
    """
    p, theta = _check_quasi_args(p, theta)
    n = c.n
    if n > QUASI_EXHAUSTIVE_MAX_N:
        raise PreconditionError(f"n = {n} > {QUASI_EXHAUSTIVE_MAX_N}; use the sampled mode")
    num, den = p.numerator, p.denominator
    A = c.matrix.astype(np.int64)
    masks = np.arange(1 << n, dtype=np.int64)
    S = ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)
    size = S.sum(axis=1)
    contrib = den * (S @ A) - num * size[:, None]
    contrib[S.astype(bool)] = 0
    pos = np.clip(contrib, 0, None).sum(axis=1)
    neg = np.clip(-contrib, 0, None).sum(axis=1)
    best = np.maximum(pos, neg)
    i = int(np.argmax(best))
    X = VertexSet(i)
    row = contrib[i]
    ys = np.flatnonzero(row > 0) if pos[i] >= neg[i] else np.flatnonzero(row < 0)
    Y = VertexSet.of(int(v) for v in ys)
    dev = blue_deviation(c, X, Y, p)
    assert dev == Fraction(int(best[i]), den)
    verdict = "violated" if dev > theta * n * n else "quasirandom"
    return QuasiReport(p, theta, n, X, Y, dev, "exhaustive", 1 << n, verdict)


def _climb(A: np.ndarray, p: float, X: np.ndarray, sign: int, max_rounds: int = 200):
    """Alternate exact best responses Y|X and X|Y, one probe per column.

    Each step is a batch of single-vertex moves that each increase
    sign * (e_B(X,Y) - p|X||Y|); a converged column is a fixed point, so
    running the columns together does not change any of them.
    """
    Y = np.zeros_like(X)
    for _ in range(max_rounds):
        gain_y = sign * (A @ X - p * X.sum(axis=0))
        new_y = ((gain_y > 1e-9) & (X == 0)).astype(X.dtype)
        gain_x = sign * (A @ new_y - p * new_y.sum(axis=0))
        new_x = ((gain_x > 1e-9) & (new_y == 0)).astype(X.dtype)
        if np.array_equal(new_x, X) and np.array_equal(new_y, Y):
            break
        X, Y = new_x, new_y
    return X, Y


def _witness_key(dev: Fraction, X: VertexSet, Y: VertexSet):
    return (-dev, X.sorted(), Y.sorted())


def _sampled_probe_range(c: TwoColoring, p: Fraction, seed: int, indices: range, block: int = 64):
    A = c.matrix.astype(np.float64)
    pf = float(p)
    best, best_float = None, -math.inf
    for lo in range(indices.start, indices.stop, block):
        ids = range(lo, min(lo + block, indices.stop))
        starts = np.stack([splitmix64_block(derive_seed(seed, i), 0, c.n) % np.uint64(3) == 0
                           for i in ids], axis=1).astype(np.float64)
        for sign in (1, -1):
            Xs, Ys = _climb(A, pf, starts, sign)
            approx = np.abs(np.einsum("ij,ij->j", Xs, A @ Ys) - pf * Xs.sum(axis=0) * Ys.sum(axis=0))
            for j in range(len(ids)):
                # only near-best candidates need the exact comparison
                if approx[j] < best_float - 0.5:
                    continue
                X = VertexSet.of(int(v) for v in np.flatnonzero(Xs[:, j]))
                Y = VertexSet.of(int(v) for v in np.flatnonzero(Ys[:, j]))
                key = _witness_key(blue_deviation(c, X, Y, p), X, Y)
                if best is None or key < best:
                    best, best_float = key, float(-key[0])
    return best


def quasi_sampled(c: TwoColoring, p, theta, probes: int, seed: int, workers: int = 1) -> QuasiReport:
    """Best deviation from seeded random starts plus hill climbing.

    A lower bound on the true maximum: "violated" is sound,
    "no-violation-found" is not a proof.
    """
    p, theta = _check_quasi_args(p, theta)
    if probes < 1:
        raise PreconditionError("probes must be at least 1")
    parts = _chunks(probes, workers)
    results = _parallel(_sampled_probe_range, [(c, p, seed, r) for r in parts], workers)
    neg_dev, xs, ys = min(results)
    X, Y = VertexSet.of(xs), VertexSet.of(ys)
    dev = -neg_dev
    verdict = "violated" if dev > theta * c.n**2 else "no-violation-found"
    return QuasiReport(p, theta, c.n, X, Y, dev, "sampled", probes, verdict)


# -- clique-count identity ---------------------------------------------------

@dataclass
class IdentityReport:
    k: int
    n: int
    p: Fraction | float
    B_k: int
    B_k1: int
    B_k2e: int
    E_direct: Fraction | float
    E_identity: Fraction | float
    equal: bool
    exact: bool
    sum_ext: int
    sum_ext_pairs: int

    @property
    def spectrum_consistent(self) -> bool:
        return self.sum_ext == (self.k + 1) * self.B_k1 and self.sum_ext_pairs == self.B_k2e

    def as_dict(self) -> dict:
        return {"k": self.k, "N": self.n, "p": self.p, "B_k": self.B_k, "B_k+1": self.B_k1,
                "B_k+2-e": self.B_k2e, "E_direct": self.E_direct, "E_identity": self.E_identity,
                "equal": self.equal, "exact": self.exact, "sum_ext": self.sum_ext,
                "sum_ext_pairs": self.sum_ext_pairs,
                "spectrum_consistent": self.spectrum_consistent}


def identity_check(c: TwoColoring, k: int, p) -> IdentityReport:
    """Compare E = sum_Q (ext_B(Q) - p^k N)^2 over blue K_k with
    2B(K_{k+2}-e) + (1 - 2p^k N)(k+1)B(K_{k+1}) + p^(2k) N^2 B(K_k).

    The left side comes from the spine spectrum; the clique counts on the
    right come from the pivoting counter and a pair-neighborhood count.
    """
    n = c.n
    if n > IDENTITY_MAX_N or not 1 <= k <= IDENTITY_MAX_K or k > n:
        raise PreconditionError(f"identity check needs n <= {IDENTITY_MAX_N} and 1 <= k <= min(n, {IDENTITY_MAX_K})")
    exact = not isinstance(p, float)
    if exact:
        p = _fraction(p)
    blue = Color.BLUE
    spec = books.spectrum(c, blue, k)
    target = p**k * n
    e_direct = sum(m * (h - target) ** 2 for h, m in spec.histogram.items())
    bk = books.count_cliques(c, blue, k)
    bk1 = books.count_cliques(c, blue, k + 1) if k + 1 <= n else 0
    bk2e = books.count_k2_minus_edge(c, blue, k)
    e_ident = 2 * bk2e + (1 - 2 * target) * (k + 1) * bk1 + p ** (2 * k) * n**2 * bk
    if exact:
        e_direct, e_ident = Fraction(e_direct), Fraction(e_ident)
        equal = e_direct == e_ident
    else:
        equal = abs(e_direct - e_ident) <= 1e-6 * max(1.0, abs(e_direct))
    return IdentityReport(k, n, p, bk, bk1, bk2e, e_direct, e_ident, equal, exact,
                          spec.total_pages, spec.total_page_pairs)


# -- epsilon-regularity ------------------------------------------------------

@dataclass
class RegularityResult:
    refuted: bool
    mode: str
    density: Fraction
    X_sub: VertexSet | None = None
    Y_sub: VertexSet | None = None
    gap: Fraction = Fraction(0)

    def as_dict(self) -> dict:
        d = {"status": "refuted" if self.refuted else "not-refuted", "mode": self.mode,
             "density": self.density, "gap": self.gap}
        if self.refuted:
            d["X_sub"], d["Y_sub"] = self.X_sub.sorted(), self.Y_sub.sorted()
        return d


def _best_gap_given_xsub(rows, xsub: int, xsize: int, ys: list[int], tmin: int, d: Fraction):
    """Largest |d(X', Y') - d| over Y' subset of ys with |Y'| >= tmin, X' fixed.

    e(X', Y') is additive over y in Y', so extreme subsets of each size are
    the top or bottom counts.
    """
    counts = sorted(((rows[y] & xsub).bit_count(), y) for y in ys)
    best = (Fraction(-1), None)
    asc = [0]
    for cnt, _ in counts:
        asc.append(asc[-1] + cnt)
    total = asc[-1]
    m = len(counts)
    for t in range(tmin, m + 1):
        lo, hi = asc[t], total - asc[m - t]
        for s, pick in ((hi, counts[m - t:]), (lo, counts[:t])):
            gap = abs(Fraction(s, xsize * t) - d)
            if gap > best[0]:
                best = (gap, [y for _, y in pick])
    return best


def regularity_witness(c: TwoColoring, X, Y, eps, color: Color = Color.RED, mode: str = "auto",
                       *, restarts: int = 32, seed: int = 0) -> RegularityResult:
    """Search for X' in X, Y' in Y, |X'| >= eps|X|, |Y'| >= eps|Y|, with
    |d(X', Y') - d(X, Y)| > eps."""
    X, Y = as_vertex_set(X), as_vertex_set(Y)
    eps = _fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    d = density(c, X, Y, color)
    if mode == "auto":
        mode = "exhaustive" if max(len(X), len(Y)) <= REGULARITY_EXHAUSTIVE_MAX else "heuristic"
    rows = c.rows(color)
    xs, ys = X.sorted(), Y.sorted()
    smin = math.ceil(eps * len(xs))
    tmin = max(1, math.ceil(eps * len(ys)))
    best = (Fraction(-1), 0, None)
    if mode == "exhaustive":
        if max(len(xs), len(ys)) > REGULARITY_EXHAUSTIVE_MAX:
            raise PreconditionError(f"exhaustive regularity check needs |X|, |Y| <= {REGULARITY_EXHAUSTIVE_MAX}")
        for sub in range(1, 1 << len(xs)):
            size = sub.bit_count()
            if size < smin:
                continue
            xsub = sum(1 << xs[i] for i in range(len(xs)) if sub >> i & 1)
            gap, ysel = _best_gap_given_xsub(rows, xsub, size, ys, tmin, d)
            if gap > best[0]:
                best = (gap, xsub, ysel)
    elif mode == "heuristic":
        size0 = max(smin, 1)
        for r in range(restarts):
            rng = SplitMix64(derive_seed(seed, r))
            order = xs[:]
            rng.shuffle(order)
            cur = set(order[: max(size0, rng.randbelow(len(xs)) + 1)])
            cur_gap, cur_y = _best_gap_given_xsub(rows, sum(1 << v for v in cur), len(cur), ys, tmin, d)
            improved = True
            while improved:
                improved = False
                for v in xs:
                    trial = cur ^ {v}
                    if len(trial) < size0:
                        continue
                    g, ysel = _best_gap_given_xsub(rows, sum(1 << u for u in trial), len(trial), ys, tmin, d)
                    if g > cur_gap:
                        cur, cur_gap, cur_y, improved = trial, g, ysel, True
            if cur_gap > best[0]:
                best = (cur_gap, sum(1 << v for v in cur), cur_y)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    gap, xsub, ysel = best
    if ysel is None or gap <= eps:
        return RegularityResult(False, mode, d, gap=max(gap, Fraction(0)))
    Xs, Ys = VertexSet(xsub), VertexSet.of(ysel)
    check = abs(density(c, Xs, Ys, color) - d)
    assert check == gap
    return RegularityResult(True, mode, d, Xs, Ys, check)


# -- blocked configurations --------------------------------------------------

@dataclass
class BlockedConfigReport:
    sets: list[VertexSet]
    eta: Fraction
    delta: Fraction
    internal: list[dict]
    cross: dict
    density_patterns: list[str]
    regularity: dict
    patterns: list[str]

    @property
    def verdict(self) -> str:
        if len(self.patterns) == 2:
            return "both"
        return self.patterns[0] if self.patterns else "neither"

    def as_dict(self) -> dict:
        return {"sets": [s.sorted() for s in self.sets], "eta": self.eta, "delta": self.delta,
                "internal": self.internal,
                "cross": {f"{i},{j}": v for (i, j), v in self.cross.items()},
                "density_patterns": self.density_patterns,
                "regularity": self.regularity, "patterns": self.patterns,
                "verdict": self.verdict,
                "caveat": "not-refuted regularity is evidence, not proof" if self.patterns else None}


def blocked_config_check(c: TwoColoring, sets: Sequence, eta, delta, *,
                         regularity_mode: str = "auto", seed: int = 0) -> BlockedConfigReport:
    """Check the red-blocked and blue-blocked conditions on disjoint C_1..C_k.

    Densities are exact. Regularity is tested in the red graph.
    """
    sets = [as_vertex_set(s) for s in sets]
    eta, delta = _fraction(eta), _fraction(delta)
    seen = 0
    for s in sets:
        if not s:
            raise DomainError("sets must be nonempty")
        if s.mask & seen:
            raise DomainError("sets must be pairwise disjoint")
        seen |= s.mask
    k = len(sets)
    internal = [{"red": density(c, s, s, Color.RED), "blue": density(c, s, s, Color.BLUE)} for s in sets]
    cross = {(i, j): {"red": density(c, sets[i], sets[j], Color.RED),
                      "blue": density(c, sets[i], sets[j], Color.BLUE)}
             for i in range(k) for j in range(i + 1, k)}
    patterns_d = []
    for name, inner, outer in (("red-blocked", "red", "blue"), ("blue-blocked", "blue", "red")):
        if all(t[inner] >= delta for t in internal) and all(v[outer] >= delta for v in cross.values()):
            patterns_d.append(name)
    refutations = []
    pairs = [(i, i) for i in range(k)] + list(cross)
    for i, j in pairs:
        r = regularity_witness(c, sets[i], sets[j], eta, Color.RED, regularity_mode, seed=seed)
        if r.refuted:
            refutations.append({"pair": [i, j], **r.as_dict()})
    regularity = {"status": "refuted" if refutations else "not-refuted", "witnesses": refutations}
    patterns = [] if refutations else list(patterns_d)
    return BlockedConfigReport(sets, eta, delta, internal, cross, patterns_d, regularity, patterns)


# -- distance to a balanced complete k-partite red graph ---------------------

def recolor_count(c: TwoColoring, partition: Partition) -> int:
    """Blue edges across parts plus red edges inside parts."""
    inside_red = sum(pair_count(c, P, P, Color.RED) for P in partition.parts) // 2
    inside_blue = sum(pair_count(c, P, P, Color.BLUE) for P in partition.parts) // 2
    return inside_red + (c.blue_edge_count() - inside_blue)


def _canonical_labels(labels: np.ndarray) -> tuple[int, ...]:
    remap, out = {}, []
    for l in labels.tolist():
        out.append(remap.setdefault(l, len(remap)))
    return tuple(out)


def _swap_descent(W: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    n = len(labels)
    while True:
        S = W @ np.eye(k, dtype=np.int64)[labels]
        own = S[np.arange(n), labels]
        M = S[:, labels]
        delta = own[:, None] - M + own[None, :] - M.T + 2 * W
        delta[labels[:, None] == labels[None, :]] = 0
        idx = int(np.argmin(delta))
        if delta.flat[idx] >= 0:
            return labels
        u, v = divmod(idx, n)
        labels[u], labels[v] = labels[v], labels[u]


def _kdist_restarts(c: TwoColoring, k: int, seed: int, indices: range):
    W = 2 * c.matrix.astype(np.int64) - 1
    np.fill_diagonal(W, 0)
    best = None
    for r in indices:
        rng = SplitMix64(derive_seed(seed, r))
        lab = [i % k for i in range(c.n)]
        rng.shuffle(lab)
        labels = _swap_descent(W, np.array(lab, dtype=np.int64), k)
        part = Partition.from_labels(_canonical_labels(labels))
        key = (recolor_count(c, part), _canonical_labels(labels))
        if best is None or key < best:
            best = key
    return best


def kpartite_distance(c: TwoColoring, k: int, restarts: int = 16, seed: int = 0,
                      workers: int = 1) -> tuple[int, Partition]:
    """Upper bound on the recolorings needed to make red balanced complete k-partite.

    Local search over balanced partitions with vertex swaps between parts;
    the returned count is exact for the returned partition.
    """
    if not 2 <= k <= c.n:
        raise DomainError("need 2 <= k <= n")
    if restarts < 1:
        raise DomainError("restarts must be at least 1")
    results = _parallel(_kdist_restarts, [(c, k, seed, r) for r in _chunks(restarts, workers)], workers)
    count, labels = min(results)
    return count, Partition.from_labels(labels)
