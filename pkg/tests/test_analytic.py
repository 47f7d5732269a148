import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from booklab import analytic as A
from booklab.errors import DomainError
from booklab.rng import SplitMix64


def test_F_is_one_on_the_diagonal_exactly():
    for p in (Fraction(1, 2), Fraction(3, 5), Fraction(9, 10)):
        for k in range(1, 8):
            assert A.F([p] * k, p) == 1


def test_F_with_a_zero_coordinate():
    p, k = 0.6, 4
    assert A.F([0.0, 0.3, 0.9, 0.2], p) >= (1 - p) ** (1 - k) / k


def test_F_domain():
    with pytest.raises(DomainError):
        A.F([1.2, 0.5], 0.5)
    with pytest.raises(DomainError):
        A.F([0.5], 1.0)


def test_F_grad_matches_finite_differences():
    x = np.array([0.2, 0.7, 0.45])
    h = 1e-7
    num = [(A.F(list(x + h * e), 0.6) - A.F(list(x - h * e), 0.6)) / (2 * h) for e in np.eye(3)]
    assert np.allclose(A.F_grad(x, 0.6), num, atol=1e-6)


def test_psi():
    assert A.psi(0.4, 0.4, 5) == pytest.approx(1.0, abs=1e-14)
    assert A.psi(1, 0.5, 3) == pytest.approx(4.0)
    w, v = A.psi_min(0.7, 5)
    assert abs(w - 0.7) < 1e-10 and abs(v - 1) < 1e-10


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.floats(0.05, 0.95), st.integers(2, 12))
def test_psi_at_least_one(w, p, k):
    assert A.psi(w, p, k) >= 1 - 1e-12


def test_thresholds():
    assert A.k1(0.9) == 6
    assert A.k1(A.P_STAR) == 6
    assert A.k1(0.2) == pytest.approx(31.945842, abs=1e-6)
    assert A.k1(0.5) == pytest.approx(7.294178, abs=1e-6)
    assert A.g(A.P_STAR) == pytest.approx(18.4, abs=0.05)
    assert A.g(A.P_STAR) < math.e**3
    with pytest.raises(DomainError):
        A.g(0.6)
    assert A.f(0.5, 2) == pytest.approx(2 / (math.e**2 * 2))


def test_interval_checks():
    g = A.check_g_threshold()
    assert g["below_e3"]
    assert g["g"][0] - 1e-12 <= A.g(A.P_STAR) <= g["g"][1] + 1e-12
    assert A.check_k1_constant_case()["at_least_one"]


def test_k2_is_k1_reflected():
    for p in np.linspace(0.01, 0.99, 99):
        assert A.k2(p) == A.k1(1 - p)


def test_k1_monotone():
    assert A.k1_monotone_on_grid()


def test_c1():
    assert A.c1(2) == 1
    assert A.c1(7) == 1
    assert A.c1(8) == pytest.approx(0.5206624701428577, rel=1e-12)
    # bisection lands on the boundary of the condition
    t = A.c1_root(8)
    assert 8 >= A.k2(1 / (t + 1))
    assert 8 < A.k2(1 / (t * (1 - 1e-9) + 1))


def test_c1_asymptotic_ratio():
    """t k / log k with t = c1^(1/k) should drift toward 1."""
    ratios = [A.c1_root(k) * k / math.log(k) for k in (50, 100, 1000, 10**5)]
    assert ratios[0] == pytest.approx(2.1156, abs=1e-3)
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert 0.5 <= ratios[1] <= 2


def test_k2_of_c_monotone():
    assert A.k2_of_c_nonincreasing(10, np.linspace(0.01, 1, 60))


def test_aes_rho():
    assert A.aes_rho(2) == Fraction(1, 10)
    assert A.aes_rho(3) == Fraction(1, 24)
    assert A.aes_rho(10) == Fraction(1, 290)


def test_mult_jensen_gap():
    assert A.mult_jensen_gap([0.4] * 5) == pytest.approx(0, abs=1e-15)
    # outside (1/k, 1) the inequality is false
    assert A.mult_jensen_gap([0.9, 0.1]) == pytest.approx(-0.08)
    assert A.mult_jensen_gap([0.9, 0.6]) > 0
    with pytest.raises(DomainError):
        A.mult_jensen_gap([0.0, 0.5])


def test_mult_jensen_property_run():
    rng = SplitMix64(11)
    worst = 0.0
    for _ in range(20_000):
        k = 2 + rng.randbelow(5)
        x = [1 / k + (1 - 1 / k) * rng.random() for _ in range(k)]
        x = [min(max(v, 1 / k + 1e-12), 1 - 1e-12) for v in x]
        worst = min(worst, A.mult_jensen_gap(x))
    assert worst >= -1e-12


def test_phi2_formula():
    y, k, h = -0.4, 5, 1e-4
    num = (A.phi(y + h, k) - 2 * A.phi(y, k) + A.phi(y - h, k)) / h**2
    assert A.phi2(y, k) == pytest.approx(num, rel=1e-5)


def test_holder_defect():
    a, b, k = math.log(0.3), math.log(0.9), 4
    m = A.phi2_lower(a, b, k)
    assert m > 0
    assert A.holder_defect_gap([-0.5] * 4, k, m) == pytest.approx(0, abs=1e-15)
    rng = SplitMix64(5)
    for _ in range(2000):
        y = [a + (b - a) * rng.random() for _ in range(k)]
        assert A.holder_defect_gap(y, k, m) >= -1e-12
    with pytest.raises(DomainError):
        A.phi2_lower(math.log(0.1), math.log(0.9), 4)


def test_grid_min_unrestricted():
    r = A.grid_min_F(0.9, 6)
    assert r.minimum >= 1 - 1e-9 and r.minimum == pytest.approx(1, abs=1e-9)
    assert max(abs(x - 0.9) for x in r.argmin) < 1e-3
    assert r.hypothesis_holds and r.delta0_hat is None


def test_grid_min_restricted_margin():
    r = A.grid_min_F(0.55, 6, 21, 0.2)
    assert r.delta0_hat == pytest.approx(0.11168687120819887, abs=1e-6)
    assert max(abs(x - 0.55) for x in r.argmin) >= 0.2 - 1e-9


def test_grid_min_notes_failed_hypothesis():
    r = A.grid_min_F(0.5, 2)
    assert not r.hypothesis_holds and r.notes
    assert r.minimum == pytest.approx(1, abs=1e-9)


def test_grid_min_domain():
    with pytest.raises(DomainError):
        A.grid_min_F(0.6, 7, mode="grid")
    with pytest.raises(DomainError):
        A.grid_min_F(0.6, 3, resolution=5)


def test_descent_mode_for_larger_k():
    r = A.grid_min_F(0.7, 8, mode="descent", restarts=8, seed=1)
    assert r.method == "descent" and r.minimum >= 1 - 1e-9
