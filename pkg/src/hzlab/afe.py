"""Approximate functional equation, geometric kernel and selection identity.

On the critical line ``s = 1/2 + i t`` (``t >= 2*pi``) with ``2*pi*M*N = t``::

    zeta(s, y) ~ sum_{1<=m<=M} (m+y)^(-s) + chi(s) * sum_{1<=n<=N} e(-n y) n^(s-1)

with error ``O(1 + M^(-3/2) t^(1/2))``. ``e(x) = exp(2*pi*i*x)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidRange, NodesTooFew
from .hurwitz import EulerMaclaurinParams, HurwitzPoint, _check_shift, chi_factor, hurwitz_eval

TWO_PI = 2.0 * math.pi
AFE_TARGET = 1e-9
NEAR_INTEGER = 1e-8


def e(x):
    return np.exp(2j * np.pi * np.asarray(x, dtype=float))


def _floor(x):
    # integer part, tolerant of rounding in quantities like t/(2*pi*M)
    return int(math.floor(x * (1.0 + 1e-12) + 1e-12))


@dataclass(frozen=True)
class AfeDecomposition:
    t: float
    y: float
    M: float
    N: float
    S1: complex
    S2: complex
    residual: float

    @property
    def envelope(self):
        return afe_envelope(self.t, self.M)


def afe_envelope(t, M):
    return 1.0 + M ** -1.5 * math.sqrt(abs(t))


def shifted_sum(t, y, M):
    """sum_{1<=m<=M} (m+y)^(-1/2-it)."""
    m = np.arange(1, _floor(M) + 1, dtype=float) + y
    return complex(np.sum(np.exp(-(0.5 + 1j * t) * np.log(m))))


def twisted_sum(t, y, N):
    """sum_{1<=n<=N} e(-n y) n^(-1/2+it)."""
    n = np.arange(1, _floor(N) + 1, dtype=float)
    return complex(np.sum(e(-n * y) * np.exp((-0.5 + 1j * t) * np.log(n))))


def _default_zeta(t, y):
    return hurwitz_eval(HurwitzPoint(0.5, t, y),
                        EulerMaclaurinParams.for_height(t, AFE_TARGET))


def afe_decompose(t, y, M, zeta=None):
    """Split zeta(1/2+it, y) into the two AFE sums and report the residual.

    ``zeta(t, y)`` may be supplied (e.g. a cache) in place of direct
    evaluation at the 1e-9 target.
    """
    t, y, M = float(t), float(y), float(M)
    _check_shift(y)
    if t < TWO_PI:
        raise InvalidRange(f"t={t} below 2*pi")
    if not 1.0 <= M <= t:
        raise InvalidRange(f"M={M} outside [1, t]")
    N = t / (TWO_PI * M)
    S1 = shifted_sum(t, y, M)
    S2 = twisted_sum(t, y, N)
    z = (zeta or _default_zeta)(t, y)
    residual = abs(z - S1 - chi_factor(t) * S2)
    return AfeDecomposition(t, y, M, N, S1, S2, residual)


def balanced_M(t):
    return math.sqrt(t / TWO_PI)


def residual_envelope_scan(t_min, t_max, steps, y, M_policy="balanced", M=None,
                           zeta=None):
    """Rows ``(t, M, N, residual, envelope, ratio)`` at log-spaced heights.

    ``M_policy`` is ``"balanced"`` (``M = N = sqrt(t/2pi)``) or ``"fixed"``
    (uses ``M``).
    """
    if not TWO_PI <= t_min < t_max:
        raise InvalidRange("need 2*pi <= t_min < t_max")
    if steps < 2:
        raise InvalidRange("steps must be >= 2")
    if M_policy not in ("balanced", "fixed"):
        raise ValueError(f"unknown M_policy {M_policy!r}")
    if M_policy == "fixed" and M is None:
        raise ValueError("fixed policy requires M")
    rows = []
    for t in np.geomspace(t_min, t_max, int(steps)):
        t = float(t)
        m = balanced_M(t) if M_policy == "balanced" else float(M)
        d = afe_decompose(t, y, m, zeta)
        env = afe_envelope(t, m)
        rows.append((t, d.M, d.N, d.residual, env, d.residual / env))
    return rows


# -- geometric kernel ----------------------------------------------------------

def kernel_cutoff(t):
    return _floor(math.sqrt(t / TWO_PI))


def _dist_to_int(u):
    return np.abs(u - np.round(u))


def kernel_values(t, u):
    """K(t, u) = sum_{1<=n<=sqrt(t/2pi)} e(-n u), vectorized over u."""
    L = kernel_cutoff(t)
    if t < TWO_PI or L < 1:
        raise InvalidRange(f"t={t} below 2*pi")
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    out = np.empty(u.shape, dtype=complex)
    near = _dist_to_int(u) < NEAR_INTEGER
    if near.any():
        n = np.arange(1, L + 1, dtype=float)
        out[near] = e(-np.outer(u[near], n)).sum(axis=1)
    far = ~near
    if far.any():
        uf = u[far] - np.round(u[far])      # K is 1-periodic in u
        amp = np.sin(np.pi * L * uf) / np.sin(np.pi * uf)
        out[far] = amp * e(-0.5 * (L + 1) * uf)
    return complex(out[0]) if scalar else out


def kernel_eval(t, u):
    t, u = float(t), float(u)
    if not 0.0 <= u < 1.0:
        raise InvalidRange(f"u={u} outside [0, 1)")
    return kernel_values(t, u)


def kernel_bound(t, u):
    """min(cutoff, 1/(2||u||))."""
    d = _dist_to_int(np.asarray(u, dtype=float))
    with np.errstate(divide="ignore", over="ignore"):
        return np.minimum(kernel_cutoff(t), 0.5 / d)


def kernel_l1(t, nodes):
    """Composite midpoint estimate of the integral of |K(t, u)| over [0, 1]."""
    if t < TWO_PI:
        raise InvalidRange(f"t={t} below 2*pi")
    if nodes < 1000:
        raise InvalidRange("nodes must be >= 1000")
    u = (np.arange(nodes) + 0.5) / nodes
    return float(np.abs(kernel_values(t, u)).mean())


def grid_orthogonality(z, Q):
    """Uniform-grid average of e(z u) over Q nodes u = j/Q."""
    u = np.arange(Q) / Q
    return complex(e(z * u).mean())


def selection_identity_check(t, y, V, nodes):
    """|direct truncated sum - grid discretization of the u-integral|.

    The grid average over ``nodes`` equispaced points is exact whenever
    ``nodes`` exceeds every index difference, so the result is rounding only.
    """
    t, y, V = float(t), float(y), float(V)
    _check_shift(y)
    if not TWO_PI <= t <= V:
        raise InvalidRange("need 2*pi <= t <= V")
    long_len = _floor(math.sqrt(V))
    if nodes <= 4 * long_len + 1:
        raise NodesTooFew(f"nodes={nodes} must exceed {4 * long_len + 1}")
    direct = shifted_sum(t, y, math.sqrt(t / TWO_PI))
    m = np.arange(1, long_len + 1, dtype=float)
    terms = np.exp(-(0.5 + 1j * t) * np.log(m + y))
    u = np.arange(nodes) / nodes
    poly = e(np.outer(u, m)) @ terms
    grid = np.mean(poly * kernel_values(t, u))
    return abs(direct - complex(grid))
