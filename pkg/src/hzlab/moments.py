"""Moment integrals, ratio diagnostics and scaling fits.

All integrals use uniform composite Simpson on a grid whose evaluation is
split into fixed blocks (see ``_backend.map_blocks``), so results do not
depend on the thread count.
"""
import math
import time
from dataclasses import dataclass

import numpy as np

from . import _backend
from .afe import TWO_PI, _floor, e
from .dirichlet import PolynomialSpec, TGrid, eval_at, multi_eval
from .errors import DegenerateDesign, InvalidRange, StepTooCoarse, TooFewPoints
from .hurwitz import _check_shift, hurwitz_grid

MAX_STEP = 0.2
EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class QuadratureSpec:
    step: float = 0.05
    refine_check: bool = True

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")


@dataclass(frozen=True)
class MomentResult:
    value: float
    quad_error_est: float
    evals: int
    elapsed_seconds: float


@dataclass(frozen=True)
class ScalingFit:
    logC: float
    p: float
    q: float
    rms_residual: float
    n_points: int = 0


def rho(x):
    """Smoothing weight min(1, 1/|x|)."""
    ax = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore"):
        out = np.where(ax <= 1.0, 1.0, 1.0 / np.maximum(ax, 1.0))
    return float(out) if out.ndim == 0 else out


def _panels(length, step):
    n = max(2, math.ceil(length / step - 1e-9))
    return n + (n % 2)


def simpson(f, h):
    """Composite Simpson for samples ``f`` (odd length) at spacing ``h``."""
    f = np.asarray(f)
    if f.size < 3 or f.size % 2 == 0:
        raise ValueError("Simpson needs an odd number (>= 3) of samples")
    return float(h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum()))


def _check_step(quad, limit=MAX_STEP):
    if quad.step > limit:
        raise StepTooCoarse(f"step {quad.step} exceeds {limit:.4g}")


def _grid(a, b, quad):
    """(t0, h, count, coarse_h) of the sampling grid for [a, b]."""
    n = _panels(b - a, quad.step)
    h = (b - a) / n
    if quad.refine_check:
        return a, h / 2.0, 2 * n + 1, h
    return a, h, n + 1, h


def _simpson_pair(f, coarse_h, refine):
    if refine:
        value = simpson(f[::2], coarse_h)
        return value, abs(simpson(f, coarse_h / 2.0) - value)
    return simpson(f, coarse_h), 0.0


def _integrate(sampler, a, b, quad):
    """Integrate ``sampler(t0, h, count) -> samples`` over [a, b].

    With ``refine_check`` the grid is sampled once at half step; the coarse
    Simpson value is the reported value and the fine one gives the error
    estimate.
    """
    start = time.perf_counter()
    t0, h, count, coarse = _grid(a, b, quad)
    f = sampler(t0, h, count)
    value, err = _simpson_pair(f, coarse, quad.refine_check)
    return MomentResult(max(value, 0.0), err, int(count), time.perf_counter() - start)


def zeta_moments(V, y, powers=(2, 4), quad=QuadratureSpec(), threads=1):
    """Integrals of |zeta(1/2+it, y)|^p over [-V, V] for several powers at once.

    Computed as twice the integral over [0, V] (conjugation symmetry); one
    grid of zeta values serves every power.
    """
    V, y = float(V), float(y)
    _check_shift(y)
    if not V > TWO_PI:
        raise InvalidRange(f"V={V} must exceed 2*pi")
    _check_step(quad)
    start = time.perf_counter()
    t0, h, count, coarse = _grid(0.0, V, quad)
    mod = np.abs(hurwitz_grid(0.5, y, t0, h, count, threads=threads))
    out = {}
    for p in powers:
        value, err = _simpson_pair(mod ** p, coarse, quad.refine_check)
        out[p] = MomentResult(2.0 * max(value, 0.0), 2.0 * err, int(count),
                              time.perf_counter() - start)
    return out


def zeta_power_moment(V, y, power, quad=QuadratureSpec(), threads=1):
    """Integral of |zeta(1/2+it, y)|^power over [-V, V], power in {2, 4}."""
    if power not in (2, 4):
        raise ValueError("power must be 2 or 4")
    return zeta_moments(V, y, (power,), quad, threads)[power]


def zeta_moment_half_line(V, y, power, quad=QuadratureSpec(), threads=1):
    """Same integrand over [0, V] only."""
    r = zeta_power_moment(V, y, power, quad, threads)
    return MomentResult(r.value / 2.0, r.quad_error_est / 2.0, r.evals, r.elapsed_seconds)


def second_moment_main_term(V):
    """V (log(V/2pi) + 2 gamma - 1): classical main term over [0, V]."""
    return V * (math.log(V / TWO_PI) + 2.0 * EULER_GAMMA - 1.0)


def twisted_polynomial(V, y, u):
    """(freqs, coeffs) of sum_{1<=m<=sqrt V} (m+y)^(-1/2-it) e(m u)."""
    m = np.arange(1, _floor(math.sqrt(V)) + 1, dtype=float)
    logs = np.log(m + y)
    return -logs, np.exp(-0.5 * logs) * e(m * u)


def twisted_fourth_moment(V, y, u, quad=QuadratureSpec(), threads=1):
    """Integral over [2pi, V] of |sum_{m<=sqrt V} (m+y)^(-1/2-it) e(mu)|^4."""
    V, y, u = float(V), float(y), float(u)
    _check_shift(y)
    if not V > TWO_PI:
        raise InvalidRange(f"V={V} must exceed 2*pi")
    if not 0.0 <= u < 1.0:
        raise InvalidRange(f"u={u} outside [0, 1)")
    _check_step(quad)
    freqs, coeffs = twisted_polynomial(V, y, u)

    def sampler(t0, h, count):
        vals = _backend.map_blocks(
            lambda a, b: _backend.expsum_grid(freqs, coeffs, t0 + a * h, h, b - a),
            count, threads=threads)
        return np.abs(vals) ** 4

    return _integrate(sampler, TWO_PI, V, quad)


def product_step_limit(specF, specG):
    """Largest admissible Simpson step for the product mean value."""
    arg = 2 * specF.K * (abs(specF.alpha) + abs(specG.alpha)) * 2 * specG.K
    return min(MAX_STEP, 1.0 / (4.0 * math.log(arg)))


def product_mean_value(T, specF, specG, quad=QuadratureSpec(), threads=1):
    """Integral over [0, T] of |F(t)|^2 |G(t)|^2; frequency multipliers live in the specs."""
    T = float(T)
    if not T >= 1.0:
        raise InvalidRange("T must be >= 1")
    _check_step(quad, product_step_limit(specF, specG))

    def sampler(t0, h, count):
        grid = TGrid(t0, h, count)
        f = multi_eval(specF, grid, threads)
        g = multi_eval(specG, grid, threads)
        return (f.real ** 2 + f.imag ** 2) * (g.real ** 2 + g.imag ** 2)

    return _integrate(sampler, 0.0, T, quad)


def theorem3_ratio(mv, T, K, L, log_power=15):
    """mv / ((T+KL) K L log^15 T), or with log^3(2KLT) when ``log_power == 3``."""
    value = mv.value if isinstance(mv, MomentResult) else float(mv)
    if log_power == 15:
        if not T > math.e:
            raise InvalidRange("T must exceed e")
        logs = math.log(T) ** 15
    elif log_power == 3:
        logs = math.log(2.0 * K * L * T) ** 3
    else:
        raise ValueError("log_power must be 15 or 3")
    return value / ((T + K * L) * K * L * logs)


def t2_ratio(t, specD, V, T, sigma_step=0.1, threads=1):
    """|D(t)| / (K^(1/2) * int_{-V}^{V} |zeta(1/2+i s-i alpha t, theta)| rho(s) ds + K log T / V).

    ``specD`` carries alpha, so ``eval_at(specD, t)`` is D(alpha t).
    """
    if not np.allclose(specD.coeffs, 1.0):
        raise ValueError("specD must have all-ones coefficients")
    if not 1.0 <= V <= T:
        raise InvalidRange("need 1 <= V <= T")
    if not 0 < sigma_step <= 0.1:
        raise StepTooCoarse("sigma step must be <= 0.1")
    n = _panels(2.0 * V, sigma_step)
    h = 2.0 * V / n
    sig = -V + h * np.arange(n + 1)
    z = hurwitz_grid(0.5, specD.theta, -V - specD.alpha * t, h, n + 1, threads=threads)
    integral = simpson(np.abs(z) * rho(sig), h)
    K = specD.K
    denom = math.sqrt(K) * integral + K * math.log(T) / V
    return abs(eval_at(specD, t)) / denom


def scaling_fit(points):
    """Least squares fit of log I = logC + p log V + q log log V."""
    pts = [(float(v), float(i)) for v, i in points]
    if len(pts) < 4:
        raise TooFewPoints(f"need >= 4 points, got {len(pts)}")
    V = np.array([p[0] for p in pts])
    I = np.array([p[1] for p in pts])
    if np.any(V < 3) or np.any(I <= 0):
        raise ValueError("need V >= 3 and I > 0")
    if len(set(V.tolist())) != len(V):
        raise DegenerateDesign("V values must be distinct")
    A = np.column_stack([np.ones_like(V), np.log(V), np.log(np.log(V))])
    if np.linalg.matrix_rank(A) < 3:
        raise DegenerateDesign("design matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(A, np.log(I), rcond=None)
    resid = np.log(I) - A @ coef
    return ScalingFit(float(coef[0]), float(coef[1]), float(coef[2]),
                      float(np.sqrt(np.mean(resid ** 2))), len(pts))


def dyadic_block_max(T, specD, specE, quad=None, threads=1):
    """Max over dyadic V = 1, 2, 4, ... <= T of the integral over [V, 2V] of |D E|^2.

    Dyadic sampling of the max over 1 <= V <= T; returns ``(V, value)``.
    """
    if not T >= 1.0:
        raise InvalidRange("T must be >= 1")
    quad = quad or QuadratureSpec(min(0.05, product_step_limit(specD, specE)), False)
    _check_step(quad, product_step_limit(specD, specE))

    def sampler(t0, h, count):
        grid = TGrid(t0, h, count)
        d = multi_eval(specD, grid, threads)
        g = multi_eval(specE, grid, threads)
        return (d.real ** 2 + d.imag ** 2) * (g.real ** 2 + g.imag ** 2)

    best = (1.0, -1.0)
    V = 1.0
    while V <= T:
        value = _integrate(sampler, V, 2.0 * V, quad).value
        if value > best[1]:
            best = (V, value)
        V *= 2.0
    return best


def t1_bound(T, specF, specG, quad=None, threads=1):
    """(KL)^2 + log T * dyadic max for the all-ones versions of F and G."""
    D = PolynomialSpec(specF.K, np.ones(specF.K), specF.theta, specF.alpha)
    E = PolynomialSpec(specG.K, np.ones(specG.K), specG.theta, specG.alpha)
    _, peak = dyadic_block_max(T, D, E, quad, threads)
    return (specF.K * specG.K) ** 2 + math.log(T) * peak
