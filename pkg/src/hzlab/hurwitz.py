"""Hurwitz zeta with the n >= 1 index convention, and the chi factor.

``zeta(s, y) = sum_{n>=1} (n + y)**(-s)`` for ``0 <= y < 1``, continued to
``s != 1`` by Euler-Maclaurin summation. This equals the classical Hurwitz
zeta at second argument ``1 + y``.

Complex values are plain Python ``complex`` (or numpy complex128 arrays for
grids).
"""
import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from . import _backend
from .errors import GammaOverflow, InvalidShift, PoleProximity, PrecisionUnreachable

MAX_BERNOULLI_PAIRS = 25
DEFAULT_PAIRS = 10


@dataclass(frozen=True)
class HurwitzPoint:
    sigma: float
    t: float
    y: float = 0.0

    @property
    def s(self):
        return complex(self.sigma, self.t)


@dataclass(frozen=True)
class EulerMaclaurinParams:
    cutoff_N: int
    bernoulli_pairs_q: int = DEFAULT_PAIRS
    target_abs_error: float = 1e-10

    def __post_init__(self):
        if self.cutoff_N < 1:
            raise ValueError("cutoff_N must be >= 1")
        if not 1 <= self.bernoulli_pairs_q <= MAX_BERNOULLI_PAIRS:
            raise ValueError("bernoulli_pairs_q must lie in [1, 25]")
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")

    @classmethod
    def for_height(cls, t, target=None):
        """Default truncation for height ``t``."""
        return cls(cutoff_N=default_cutoff(t),
                   bernoulli_pairs_q=DEFAULT_PAIRS,
                   target_abs_error=target or default_target(t))


def default_cutoff(t):
    return max(math.ceil(1.1 * abs(t)), 50)


def default_target(t):
    return 1e-10 if abs(t) <= 1e4 else 1e-8


@lru_cache(maxsize=None)
def _bernoulli_coeffs():
    # B_{2k}/(2k)! for k = 1..MAX_BERNOULLI_PAIRS+1
    b = bernoulli(2 * MAX_BERNOULLI_PAIRS + 2)
    return tuple(b[2 * k] / math.factorial(2 * k)
                 for k in range(1, MAX_BERNOULLI_PAIRS + 2))


def _check_shift(y):
    if not (0.0 <= y < 1.0) or math.isnan(y):
        raise InvalidShift(f"shift y={y!r} outside [0, 1)")


def _tail_pairs(sigma, tmax, X, q, target):
    """Smallest q' >= q whose Euler-Maclaurin remainder bound is below target.

    The bound uses ``|s| <= |sigma + i*tmax|`` termwise, so it covers every
    height up to ``tmax`` at once.
    """
    bc = _bernoulli_coeffs()
    logX = math.log(X)

    def bound(q):
        # first omitted term, times |s+2q+1|/(sigma+2q+1)
        k = q + 1
        logpoch = sum(math.log(abs(complex(sigma + j, tmax)))
                      for j in range(2 * k - 1))
        mag = abs(bc[k - 1]) * math.exp(logpoch - (sigma + 2 * k - 1) * logX)
        damp = sigma + 2 * q + 1
        if damp <= 0:
            return math.inf
        return mag * abs(complex(sigma + 2 * q + 1, tmax)) / damp

    while bound(q) >= target:
        if q >= MAX_BERNOULLI_PAIRS:
            raise PrecisionUnreachable(
                f"Euler-Maclaurin tail bound {bound(q):.3g} exceeds target "
                f"{target:.3g} with q={MAX_BERNOULLI_PAIRS}, N+1+y={X:g}")
        q += 1
    return q


def _em_tail(s, X, q):
    """Integral term, half term and q Bernoulli corrections at X = N+1+y.

    ``s`` may be a scalar or numpy array.
    """
    s = np.asarray(s, dtype=complex)
    bc = _bernoulli_coeffs()
    logX = math.log(X)
    xs = np.exp(-s * logX)
    total = X * xs / (s - 1.0) + 0.5 * xs
    poch = s.copy()                 # (s)_{2k-1}
    xpow = xs / X                   # X^{-s-2k+1}
    inv_x2 = 1.0 / (X * X)
    for k in range(1, q + 1):
        total = total + bc[k - 1] * poch * xpow
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        xpow = xpow * inv_x2
    return total


def _main_sum(sigma, y, N, t0, step, count):
    n = np.arange(1, N + 1, dtype=float) + y
    logn = np.log(n)
    return _backend.expsum_grid(-logn, np.exp(-sigma * logn), t0, step, count)


def hurwitz_eval(point, params=None):
    """zeta(sigma + i t, y) with the n >= 1 convention.

    Conjugation is exact: negative heights are evaluated at ``-t`` and
    conjugated.
    """
    sigma, t, y = float(point.sigma), float(point.t), float(point.y)
    _check_shift(y)
    if params is None:
        params = EulerMaclaurinParams.for_height(t)
    s = complex(sigma, t)
    if abs(s - 1.0) < 10.0 * params.target_abs_error:
        raise PoleProximity(f"|s-1|={abs(s - 1.0):.3g} too close to the pole")
    if t < 0:
        return hurwitz_eval(HurwitzPoint(sigma, -t, y), params).conjugate()
    N = params.cutoff_N
    X = N + 1.0 + y
    q = _tail_pairs(sigma, t, X, params.bernoulli_pairs_q, params.target_abs_error)
    main = _main_sum(sigma, y, N, t, 0.0, 1)[0]
    value = complex(main + _em_tail(s, X, q))
    if not cmath.isfinite(value):
        raise PrecisionUnreachable(f"non-finite value at s={s}, y={y}")
    return value


def riemann_eval(s, params=None):
    """Riemann zeta; alias of :func:`hurwitz_eval` at ``y = 0``."""
    s = complex(s)
    return hurwitz_eval(HurwitzPoint(s.real, s.imag, 0.0), params)


def hurwitz_grid(sigma, y, t0, step, count, target=None, threads=1):
    """zeta(sigma + i t_j, y) on ``t_j = t0 + j*step`` as a complex128 array.

    Each block of the grid uses the cutoff of its largest height, so values
    differ from :func:`hurwitz_eval` by at most the target error.
    """
    sigma, y = float(sigma), float(y)
    _check_shift(y)

    def block(a, b):
        ta, tb = t0 + a * step, t0 + (b - 1) * step
        tmax = max(abs(ta), abs(tb))
        tol = target or default_target(tmax)
        if sigma == 1.0:
            tmin = 0.0 if ta * tb <= 0 else min(abs(ta), abs(tb))
            if tmin < 10.0 * tol:
                raise PoleProximity("grid passes too close to s=1")
        N = default_cutoff(tmax)
        X = N + 1.0 + y
        q = _tail_pairs(sigma, tmax, X, DEFAULT_PAIRS, tol)
        ts = ta + step * np.arange(b - a)
        main = _main_sum(sigma, y, N, ta, step, b - a)
        return main + _em_tail(sigma + 1j * ts, X, q)

    return _backend.map_blocks(block, int(count), threads=threads)


# -- Gamma and chi -----------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def loggamma(z):
    """log Gamma(z) for complex z by the g=7 Lanczos approximation.

    The imaginary part is correct modulo 2*pi only.
    """
    z = complex(z)
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.log(math.pi) - _log_sin(math.pi * z) - loggamma(1.0 - z)
    z -= 1.0
    x = _LANCZOS_P[0]
    for i in range(1, len(_LANCZOS_P)):
        x += _LANCZOS_P[i] / (z + i)
    tt = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(tt) - tt + cmath.log(x)


def _log_sin(w):
    # log sin(w) without overflow for large |Im w|
    w = complex(w)
    if w.imag < 0:
        return _log_sin(w.conjugate()).conjugate()
    e2 = cmath.exp(2j * w)          # modulus <= 1
    return -1j * w + cmath.log((e2 - 1.0) / 2j)


def log_chi(s):
    """log chi(s) where chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s)."""
    s = complex(s)
    return (s * math.log(2.0) + (s - 1.0) * math.log(math.pi)
            + _log_sin(0.5 * math.pi * s) + loggamma(1.0 - s))


def chi(s):
    return cmath.exp(log_chi(s))


def chi_factor(t):
    """chi(1/2 + i t), normalized to unit modulus."""
    t = float(t)
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    if abs(t) > 1e8:
        raise GammaOverflow(f"|t|={abs(t):g} beyond supported range 1e8")
    v = chi(complex(0.5, t))
    return v / abs(v)


def siegel_theta(t):
    """Riemann-Siegel theta modulo 2*pi."""
    return loggamma(complex(0.25, 0.5 * t)).imag - 0.5 * t * math.log(math.pi)


def hardy_z(t, params=None):
    """Z(t) = exp(i theta(t)) zeta(1/2 + i t), real up to rounding."""
    z = hurwitz_eval(HurwitzPoint(0.5, t, 0.0), params)
    return (cmath.exp(1j * siegel_theta(t)) * z).real
