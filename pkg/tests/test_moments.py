import math

import numpy as np
import pytest

from hzlab.dirichlet import make_spec
from hzlab.errors import DegenerateDesign, InvalidRange, StepTooCoarse, TooFewPoints
from hzlab.hurwitz import hurwitz_grid
from hzlab.moments import (MomentResult, QuadratureSpec, product_mean_value,
                           product_step_limit, rho, scaling_fit, second_moment_main_term,
                           simpson, t2_ratio, theorem3_ratio, twisted_fourth_moment,
                           zeta_moment_half_line, zeta_moments, zeta_power_moment)

SQRT2 = math.sqrt(2)


def test_simpson_exact_on_cubics():
    x = np.linspace(0, 2, 11)
    assert abs(simpson(x**3 - x, 0.2) - (4 - 2)) < 1e-13
    with pytest.raises(ValueError):
        simpson(np.ones(4), 1.0)


def test_rho():
    assert rho(0.0) == 1.0 and rho(2.0) == 0.5 and rho(-2.0) == 0.5
    xs = np.linspace(-50, 50, 1001)
    r = rho(xs)
    assert np.all((r > 0) & (r <= 1)) and np.array_equal(r, rho(-xs))


def test_monotone_in_V():
    vals = [zeta_power_moment(V, 0.2, 4).value for V in (20, 40, 80)]
    assert 0 < vals[0] < vals[1] < vals[2]


def test_second_moment_refinement_at_100():
    r = zeta_power_moment(100, 0.0, 2)
    assert r.quad_error_est / r.value < 1e-3
    coarse = zeta_power_moment(100, 0.0, 2, QuadratureSpec(0.1, False)).value
    assert abs(coarse - r.value) / r.value < 1e-3


def test_second_moment_main_term_at_1000():
    v = zeta_moment_half_line(1000, 0.0, 2).value
    assert abs(v / second_moment_main_term(1000) - 1) < 0.10


def test_symmetric_interval():
    V, y = 60.0, 0.35
    n = 2400
    h = 2 * V / n
    full = simpson(np.abs(hurwitz_grid(0.5, y, -V, h, n + 1)) ** 4, h)
    half = zeta_power_moment(V, y, 4, QuadratureSpec(h, False))
    assert abs(full - half.value) / full < 1e-6


def test_powers_share_grid():
    both = zeta_moments(150, 0.5, (2, 4))
    assert both[2].value == zeta_power_moment(150, 0.5, 2).value
    assert both[4].value == zeta_power_moment(150, 0.5, 4).value


def test_moment_errors():
    with pytest.raises(StepTooCoarse):
        zeta_power_moment(100, 0.0, 4, QuadratureSpec(0.3))
    with pytest.raises(InvalidRange):
        zeta_power_moment(5, 0.0, 4)
    with pytest.raises(ValueError):
        zeta_power_moment(100, 0.0, 3)


def _fixed_length_fourth(V, y, quad):
    # independent route: direct exponentials on the same Simpson grid
    m = np.arange(1, math.floor(math.sqrt(V)) + 1) + y
    n = math.ceil((V - 2 * math.pi) / quad.step)
    n += n % 2
    t = np.linspace(2 * math.pi, V, n + 1)
    vals = np.exp(-np.outer(0.5 + 1j * t, np.log(m))).sum(axis=1)
    return simpson(np.abs(vals) ** 4, (V - 2 * math.pi) / n)


def test_twisted_u0_is_untwisted():
    q = QuadratureSpec(0.05, False)
    got = twisted_fourth_moment(300, 0.0, 0.0, q).value
    assert abs(got - _fixed_length_fourth(300, 0.0, q)) / got < 1e-10


def test_twisted_uniform_in_u():
    V = 500
    vals = [twisted_fourth_moment(V, 0.3, u).value / (V * math.log(V) ** 6)
            for u in (0.0, 0.1, 0.37, 0.5)]
    assert all(v > 0 for v in vals)
    # recorded spread is about 1.14
    assert max(vals) / min(vals) < 2.0


def test_product_single_terms():
    F = make_spec("explicit", 1, 0.2, 1.0, coeffs=[np.exp(0.7j)])
    G = make_spec("explicit", 1, 0.6, -SQRT2, coeffs=[1j])
    r = product_mean_value(37.0, F, G)
    assert abs(r.value - 37.0) / 37.0 < 1e-4


def brute_force_product(T, F, G):
    """Exact integral of the expanded |F|^2 |G|^2 trigonometric sum."""
    total = 0.0
    fk = list(zip(F.coeffs, F.frequencies))
    gl = list(zip(G.coeffs, G.frequencies))
    for a1, w1 in fk:
        for a2, w2 in fk:
            for b1, v1 in gl:
                for b2, v2 in gl:
                    c = a1 * np.conj(a2) * b1 * np.conj(b2)
                    w = w1 - w2 + v1 - v2
                    integral = T if w == 0 else (np.exp(1j * w * T) - 1) / (1j * w)
                    total += c * integral
    return total.real


def test_product_brute_force():
    F = make_spec("all_ones", 2)
    G = make_spec("all_ones", 2)
    want = brute_force_product(10.0, F, G)
    got = product_mean_value(10.0, F, G).value
    assert abs(got - want) / want < 1e-4


def test_product_phase_invariance():
    F = make_spec("random_unimodular", 8, 0.37, 1.0, seed=3)
    G = make_spec("random_unimodular", 5, 0.0, -SQRT2, seed=4)
    q = QuadratureSpec(product_step_limit(F, G))
    a = product_mean_value(200.0, F, G, q).value
    b = product_mean_value(200.0, F.scaled(np.exp(2.1j)), G, q).value
    assert abs(a - b) / a < 1e-12


def test_product_step_guard():
    F = make_spec("all_ones", 64)
    G = make_spec("all_ones", 64, alpha=-SQRT2)
    assert product_step_limit(F, G) < 0.05
    with pytest.raises(StepTooCoarse):
        product_mean_value(100.0, F, G, QuadratureSpec(0.05))


def test_theorem3_ratio():
    T = 500.0
    mv = MomentResult(T, 0.0, 0, 0.0)
    assert theorem3_ratio(mv, T, 1, 1) == pytest.approx(T / ((T + 1) * math.log(T) ** 15))
    assert theorem3_ratio(mv, T, 1, 1, 3) == pytest.approx(T / ((T + 1) * math.log(2 * T) ** 3))
    seq = [theorem3_ratio(mv, T2, 4, 4) for T2 in (10, 100, 1000, 10**4)]
    assert all(np.diff(seq) < 0)
    with pytest.raises(InvalidRange):
        theorem3_ratio(mv, 2.0, 1, 1)


def test_t2_single_term():
    D = make_spec("all_ones", 1, 0.3, 1.0)
    r = t2_ratio(60.0, D, 50.0, 1000.0)
    assert 0 < r < math.inf


def test_t2_scan_stable():
    D = make_spec("all_ones", 16, 0.3, 1.0)
    peaks = []
    for V in (50.0, 100.0):
        peaks.append(max(t2_ratio(t, D, V, 1000.0) for t in np.linspace(V, 2 * V, 101)))
    assert max(peaks) / min(peaks) < 4


def test_t2_requires_all_ones():
    with pytest.raises(ValueError):
        t2_ratio(10.0, make_spec("random_unimodular", 4, seed=1), 5.0, 10.0)


def test_scaling_fit_synthetic():
    V = np.array([10, 1e2, 1e3, 1e4, 1e5])
    fit = scaling_fit(zip(V, V * np.log(V) ** 4))
    assert abs(fit.p - 1) < 1e-6 and abs(fit.q - 4) < 1e-6 and abs(fit.logC) < 1e-6
    assert fit.rms_residual < 1e-9


def test_scaling_fit_errors():
    with pytest.raises(TooFewPoints):
        scaling_fit([(10, 1), (20, 2), (30, 3)])
    with pytest.raises(DegenerateDesign):
        scaling_fit([(10, 1), (10, 2), (30, 3), (40, 4)])


def test_dyadic_block_max():
    from hzlab.moments import dyadic_block_max
    D = make_spec("all_ones", 4, 0.37, 1.0)
    E = make_spec("all_ones", 4, 0.0, -SQRT2)
    V, peak = dyadic_block_max(300.0, D, E)
    assert V in {2.0 ** j for j in range(9)} and peak > 0
    # the peak dominates every other dyadic block
    q = QuadratureSpec(min(0.05, product_step_limit(D, E)), False)
    for W in (1.0, 8.0, 64.0):
        block = product_mean_value(2 * W, D, E, q).value - product_mean_value(W, D, E, q).value
        assert block <= peak * (1 + 1e-6)


@pytest.mark.parametrize("K,L,T", [(4, 4, 200.0), (4, 16, 500.0), (16, 4, 1000.0)])
def test_t1_inequality_for_all_ones(K, L, T):
    from hzlab.moments import t1_bound
    D = make_spec("all_ones", K, 0.37, 1.0)
    E = make_spec("all_ones", L, 0.0, -SQRT2)
    q = QuadratureSpec(min(0.05, product_step_limit(D, E)))
    lhs = product_mean_value(T, D, E, q).value
    # dyadic blocks number log2(T) ~ 1.44 log T, so the constant is about 1.5
    assert lhs <= 1.5 * t1_bound(T, D, E)
