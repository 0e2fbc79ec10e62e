"""Shifted Dirichlet polynomials ``F(t) = sum_{K<k<=2K} a_k (k+theta)^(i alpha t)``."""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import CoefficientTooLarge

# |a_k| <= 1 is checked with this slack so unit-modulus draws pass
_MODULUS_SLACK = 1e-12


@dataclass(frozen=True)
class TGrid:
    t0: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0 or not math.isfinite(self.step * self.count):
            raise ValueError("step must be positive and step*count finite")
        if self.count < 1:
            raise ValueError("count must be >= 1")

    def points(self):
        return self.t0 + self.step * np.arange(self.count)


@dataclass(frozen=True)
class PolynomialSpec:
    K: int
    coeffs: np.ndarray = field(repr=False)
    theta: float = 0.0
    alpha: float = 1.0

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if coeffs.shape != (self.K,):
            raise ValueError(f"need exactly K={self.K} coefficients")
        if np.any(np.abs(coeffs) > 1.0 + _MODULUS_SLACK):
            raise CoefficientTooLarge("coefficients must satisfy |a_k| <= 1")
        if not 0.0 <= self.theta < 1.0:
            raise ValueError("theta must lie in [0, 1)")
        if self.alpha == 0 or not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite and nonzero")

    @property
    def indices(self):
        return np.arange(self.K + 1, 2 * self.K + 1)

    @property
    def frequencies(self):
        return self.alpha * np.log(self.indices + self.theta)

    def conjugate(self):
        return PolynomialSpec(self.K, np.conj(self.coeffs), self.theta, self.alpha)

    def scaled(self, c):
        return PolynomialSpec(self.K, self.coeffs * c, self.theta, self.alpha)


def make_spec(kind, K, theta=0.0, alpha=1.0, seed=None, coeffs=None):
    """Build a spec: ``all_ones``, ``random_unimodular`` (needs ``seed``) or ``explicit``."""
    if kind == "all_ones":
        c = np.ones(K, dtype=complex)
    elif kind == "random_unimodular":
        rng = np.random.default_rng(seed)
        c = np.exp(2j * np.pi * rng.random(K))
    elif kind == "explicit":
        c = np.asarray(coeffs, dtype=complex)
        if np.any(np.abs(c) > 1.0 + _MODULUS_SLACK):
            raise CoefficientTooLarge("explicit coefficients must satisfy |a| <= 1")
        if K is None:
            K = len(c)
    else:
        raise ValueError(f"unknown coefficient kind {kind!r}")
    return PolynomialSpec(int(K), c, float(theta), float(alpha))


def eval_at(spec, t):
    """Direct evaluation at one height."""
    return complex(_backend.expsum_grid(spec.frequencies, spec.coeffs, float(t), 1.0, 1)[0])


def multi_eval(spec, grid, threads=1):
    """Evaluate on every point of ``grid`` by per-term phase recurrence."""
    freqs = spec.frequencies

    def block(a, b):
        return _backend.expsum_grid(freqs, spec.coeffs, grid.t0 + a * grid.step,
                                    grid.step, b - a)

    return _backend.map_blocks(block, grid.count, threads=threads)
