"""Closed-form thresholds and numeric verification of the book-Ramsey inequalities.

The central object is

    F(x; p) = p^(1-k) * prod(x) + (1-p)^(1-k)/k * sum((1 - x_i)^k),

which is at least 1 on [0,1]^k once k >= k1(p), with equality at x = (p,...,p).
Minima are located by a full grid scan plus bounded local refinement; the
results are empirical and are reported with their resolution and tolerance.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from mpmath import iv
from scipy import optimize

from .errors import DomainError
from .rng import SplitMix64, derive_seed

E = math.e
# k1(p) = 6 from this probability upwards
P_STAR = 1 - 5 / (4 * E)
GRID_MAX_K = 6
FLOAT_SLACK = 1e-9


def _check_p(p) -> None:
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")


def F(x: Sequence, p):
    """Works on floats and, for exact inputs, on Fractions."""
    _check_p(p)
    k = len(x)
    if k < 1:
        raise DomainError("x must be nonempty")
    for xi in x:
        if not 0 <= xi <= 1:
            raise DomainError(f"coordinate {xi} outside [0, 1]")
    prod_x = math.prod(x)
    return p ** (1 - k) * prod_x + (1 - p) ** (1 - k) * sum((1 - xi) ** k for xi in x) / k


def F_grad(x: np.ndarray, p: float) -> np.ndarray:
    k = len(x)
    a, b = p ** (1 - k), (1 - p) ** (1 - k)
    others = np.array([np.prod(np.delete(x, i)) for i in range(k)])
    return a * others - b * (1 - x) ** (k - 1)


def psi(w, p, k: int):
    _check_p(p)
    if not 0 <= w <= 1:
        raise DomainError("w must lie in [0, 1]")
    return p ** (1 - k) * w**k + (1 - p) ** (1 - k) * (1 - w) ** k


def psi_min(p: float, k: int) -> tuple[float, float]:
    """Minimiser of psi on [0, 1] from the root of its (increasing) derivative."""
    _check_p(p)
    if k < 2:
        raise DomainError("k must be at least 2")

    def dpsi(w):
        return k * p ** (1 - k) * w ** (k - 1) - k * (1 - p) ** (1 - k) * (1 - w) ** (k - 1)

    w = optimize.brentq(dpsi, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return w, psi(w, p, k)


def f(p: float, k: int) -> float:
    """(1-p)^(1-k) / (e^2 k): lower bound on F once some x_j <= 1/k."""
    _check_p(p)
    return (1 - p) ** (1 - k) / (E**2 * k)


def _lam(p: float) -> float:
    return math.log(1 / (1 - p))


def g(p: float) -> float:
    if not 0 < p <= P_STAR:
        raise DomainError(f"g is defined for 0 < p <= 1 - 5/(4e) = {P_STAR:.6f}")
    lam = _lam(p)
    L = math.log(1 / lam)
    return 1 + lam / L + 5 / L + math.log(L) / L


def k1(p: float) -> float:
    _check_p(p)
    if p >= P_STAR:
        return 6.0
    lam = _lam(p)
    return 1 + (5 - math.log(lam) + math.log(math.log(1 / lam))) / lam


def k2(p: float) -> float:
    _check_p(p)
    return k1(1 - p)


def p_of_c(c: float, k: int) -> float:
    return 1 / (c ** (1 / k) + 1)


def c_of_p(p: float, k: int) -> float:
    return ((1 - p) / p) ** k


def c1_root(k: int) -> float:
    """c1(k)^(1/k), by bisection on t = c^(1/k); stays representable for large k."""
    if k < 2:
        raise DomainError("k must be at least 2")

    def ok(t: float) -> bool:
        return k >= k2(1 / (t + 1))

    if not ok(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while True:
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            return hi
        if ok(mid):
            hi = mid
        else:
            lo = mid


def c1(k: int) -> float:
    """Infimum of c in (0, 1] with k >= k2(p(c, k)); 1 when no c qualifies (e.g. k = 2)."""
    return c1_root(k) ** k


def aes_rho(k: int) -> Fraction:
    """Minimum-degree slack 1/(3k^2 - k) in the Andrasfai-Erdos-Sos theorem."""
    if k < 2:
        raise DomainError("k must be at least 2")
    return Fraction(1, 3 * k * k - k)


# -- convexity tools ---------------------------------------------------------

def mult_jensen_gap(x: Sequence[float]) -> float:
    """(1/k) sum (1-x_i)^k - (1 - z^(1/k))^k with z = prod(x).

    Non-negative when every x_i lies in (1/k, 1), where y -> (1-e^y)^k is
    convex; outside that region the gap can be negative.
    """
    k = len(x)
    if k < 1:
        raise DomainError("x must be nonempty")
    for xi in x:
        if not 0 < xi < 1:
            raise DomainError(f"coordinate {xi} outside the open interval (0, 1)")
    z = math.prod(x)
    return sum((1 - xi) ** k for xi in x) / k - (1 - z ** (1 / k)) ** k


def phi(y, k: int):
    return (1 - np.exp(y)) ** k


def phi2(y, k: int):
    """Second derivative of y -> (1 - e^y)^k."""
    ey = np.exp(y)
    return k * ey * (1 - ey) ** (k - 2) * (k * ey - 1)


def _check_convex_interval(a: float, b: float, k: int) -> None:
    if not (math.log(1 / k) < a <= b < 0):
        raise DomainError(f"[{a}, {b}] is not inside the convexity region (log(1/{k}), 0)")


def phi2_lower(a: float, b: float, k: int, grid: int = 1001, safety: float = 0.99) -> float:
    """A valid lower bound m for phi'' on [a, b].

    phi'' is a single hump on (log(1/k), 0), so its minimum sits at an
    endpoint; the interior grid guards that analysis.
    """
    if k < 2:
        raise DomainError("k must be at least 2")
    _check_convex_interval(a, b, k)
    ys = np.linspace(a, b, grid)
    return safety * float(min(phi2(a, k), phi2(b, k), np.min(phi2(ys, k))))


def holder_defect_gap(y: Sequence[float], k: int, m: float) -> float:
    """mean(phi(y)) - phi(mean(y)) - m * var(y) / 2 for phi(y) = (1-e^y)^k."""
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise DomainError("y must be nonempty")
    mu = float(np.mean(y))
    var = float(np.mean((y - mu) ** 2))
    return float(np.mean(phi(y, k)) - phi(mu, k) - m * var / 2)


# -- minimisation of F -------------------------------------------------------

@dataclass
class MinimizationReport:
    p: float
    k: int
    minimum: float
    argmin: list[float]
    resolution: int | None
    tolerance: float
    restricted: float | None
    method: str
    probes: int
    k1: float
    hypothesis_holds: bool
    notes: list[str] = field(default_factory=list)

    @property
    def delta0_hat(self) -> float | None:
        """Empirical stability margin; an upper bound on the true margin."""
        return None if self.restricted is None else self.minimum - 1

    def as_dict(self) -> dict:
        d = asdict(self)
        d["delta0_hat"] = self.delta0_hat
        return d


def _grid_scan(p: float, k: int, resolution: int, eps0: float | None):
    pts = np.linspace(0.0, 1.0, resolution)
    a, b = p ** (1 - k), (1 - p) ** (1 - k) / k
    pw = (1 - pts) ** k
    inside = np.abs(pts - p) < eps0 - 1e-12 if eps0 is not None else None
    best_val, best_idx = math.inf, None
    # the first axis is looped, the rest broadcast
    for i0, x0 in enumerate(pts):
        P = np.array(x0)
        S = np.array(pw[i0])
        I = None if inside is None else np.array(inside[i0])
        for _ in range(k - 1):
            P = np.multiply.outer(P, pts)
            S = np.add.outer(S, pw)
            if I is not None:
                I = np.logical_and.outer(I, inside)
        vals = a * P + b * S
        if I is not None:
            vals = np.where(I, np.inf, vals)
        j = int(np.argmin(vals))
        v = float(vals.flat[j])
        if v < best_val:
            best_val = v
            best_idx = (i0,) + np.unravel_index(j, vals.shape) if k > 1 else (i0,)
    argmin = [float(pts[i]) for i in best_idx]
    return best_val, argmin, resolution**k


def _region_bounds(x: Sequence[float], p: float, eps0: float | None, k: int):
    bounds = [(0.0, 1.0)] * k
    if eps0 is None:
        return bounds
    j = int(np.argmax(np.abs(np.asarray(x) - p)))
    bounds = list(bounds)
    bounds[j] = (p + eps0, 1.0) if x[j] >= p else (0.0, p - eps0)
    return bounds


def _refine(x0, p: float, eps0: float | None, tol: float, bounds=None):
    k = len(x0)
    if bounds is None:
        bounds = _region_bounds(x0, p, eps0, k)
    x0 = np.clip(np.asarray(x0, dtype=float), [lo for lo, _ in bounds], [hi for _, hi in bounds])
    res = optimize.minimize(lambda x: F(list(x), p), x0, jac=lambda x: F_grad(x, p),
                            method="L-BFGS-B", bounds=bounds,
                            options={"ftol": tol, "gtol": tol, "maxiter": 10000})
    return float(res.fun), [float(v) for v in res.x]


def _descent(p: float, k: int, eps0: float | None, restarts: int, seed: int, tol: float):
    best = (math.inf, None)
    for r in range(restarts):
        rng = SplitMix64(derive_seed(seed, r))
        x = np.array([rng.random() for _ in range(k)])
        if eps0 is not None:
            j = rng.randbelow(k)
            lo_ok, hi_ok = p - eps0 >= 0, p + eps0 <= 1
            if hi_ok and (not lo_ok or rng.random() < 0.5):
                x[j] = p + eps0 + (1 - p - eps0) * rng.random()
            else:
                x[j] = (p - eps0) * rng.random()
        bounds = _region_bounds(x, p, eps0, k)
        val = F(list(x), p)
        for _ in range(1000):
            prev = val
            for i in range(k):
                lo, hi = bounds[i]

                def along(t, i=i):
                    y = x.copy()
                    y[i] = t
                    return F(list(y), p)

                r1 = optimize.minimize_scalar(along, bounds=(lo, hi), method="bounded",
                                              options={"xatol": 1e-12})
                if r1.fun < val:
                    x[i], val = r1.x, float(r1.fun)
            if prev - val < tol:
                break
        val, xr = _refine(list(x), p, eps0, tol)
        if val < best[0]:
            best = (val, xr)
    return best


def grid_min_F(p: float, k: int, resolution: int = 21, eps0: float | None = None, *,
               mode: str = "auto", restarts: int = 64, seed: int = 0,
               tol: float = 1e-15, refine_top: int = 1) -> MinimizationReport:
    """Minimum of F over [0,1]^k, optionally restricted to max_j |x_j - p| >= eps0.

    ``mode`` is "grid" (exhaustive grid, k <= 6), "descent" (coordinate
    descent from seeded random restarts) or "auto".
    """
    _check_p(p)
    if k < 1:
        raise DomainError("k must be positive")
    if eps0 is not None and not (eps0 > 0 and (p - eps0 >= 0 or p + eps0 <= 1)):
        raise DomainError("eps0 leaves no admissible region")
    if mode == "auto":
        mode = "grid" if k <= GRID_MAX_K else "descent"
    notes = []
    kk1 = k1(p)
    holds = k >= kk1
    if not holds:
        notes.append(f"k = {k} < k1(p) = {kk1:.4f}: F >= 1 is not guaranteed; observed minimum recorded")
    if mode == "grid":
        if k > GRID_MAX_K:
            raise DomainError(f"k = {k} too large for an exhaustive grid (max {GRID_MAX_K})")
        if resolution < 11:
            raise DomainError("grid resolution must be at least 11 points per axis")
        gval, gx, probes = _grid_scan(p, k, resolution, eps0)
        val, x = gval, gx
        starts = [(gx, None)]
        if eps0 is not None:
            # F is symmetric, so pushing the first coordinate out covers every j
            for edge, box in ((p + eps0, (p + eps0, 1.0)), (p - eps0, (0.0, p - eps0))):
                if box[0] <= box[1]:
                    starts.append(([edge] + [p] * (k - 1), [box] + [(0.0, 1.0)] * (k - 1)))
        for x0, bounds in starts:
            rval, rx = _refine(x0, p, eps0, tol, bounds)
            if rval < val:
                val, x = rval, rx
        method = "grid+refine"
        res = resolution
    elif mode == "descent":
        val, x = _descent(p, k, eps0, restarts, seed, tol)
        probes, method, res = restarts, "descent", None
        notes.append("coordinate descent from random restarts; not an exhaustive scan")
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return MinimizationReport(p, k, val, x, res, tol, eps0, method, probes, kk1, holds, notes)


def k1_monotone_on_grid(points: int = 200) -> bool:
    ps = np.linspace(1e-3, P_STAR - 1e-9, points)
    vals = [k1(float(p)) for p in ps]
    return all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def k2_of_c_nonincreasing(k: int, cs: Sequence[float]) -> bool:
    vals = [k2(p_of_c(c, k)) for c in sorted(cs)]
    return all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


# -- interval-arithmetic spot checks ----------------------------------------

def check_g_threshold() -> dict:
    """Enclose g(1 - 5/(4e)) and compare it with e^3 in interval arithmetic."""
    iv.prec = 80
    e = iv.e
    p = 1 - iv.mpf(5) / (4 * e)
    lam = iv.log(1 / (1 - p))
    L = iv.log(1 / lam)
    gv = 1 + lam / L + 5 / L + iv.log(L) / L
    e3 = iv.exp(3)
    return {"g": [float(gv.a), float(gv.b)], "e3": [float(e3.a), float(e3.b)],
            "below_e3": bool(gv.b < e3.a)}


def check_k1_constant_case(k: int = 6) -> dict:
    """Enclose (4/5)^(k-1) e^(k-3) / k, which must be >= 1 for k1 = 6 to be valid."""
    iv.prec = 80
    v = (iv.mpf(4) / 5) ** (k - 1) * iv.exp(k - 3) / k
    return {"value": [float(v.a), float(v.b)], "at_least_one": bool(v.a >= 1)}
