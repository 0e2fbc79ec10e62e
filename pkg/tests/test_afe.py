import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hzlab.afe import (afe_decompose, afe_envelope, balanced_M, e, grid_orthogonality,
                       kernel_bound, kernel_cutoff, kernel_eval, kernel_l1,
                       residual_envelope_scan, selection_identity_check)
from hzlab.errors import InvalidRange, NodesTooFew
from hzlab.hurwitz import chi_factor

TWO_PI = 2 * math.pi


def test_minimal_decomposition():
    d = afe_decompose(TWO_PI, 0.3, 1.0)
    assert d.N == 1.0
    assert abs(d.S1 - 1.3 ** complex(-0.5, -TWO_PI)) < 1e-14
    assert abs(d.S2 - np.exp(-2j * math.pi * 0.3)) < 1e-14
    assert d.residual >= 0


def test_balanced_envelope_at_100():
    # C calibrated from the 10..1000 balanced scan
    c_emp = max(r[5] for r in residual_envelope_scan(10, 1000, 100, 0.0))
    d = afe_decompose(100.0, 0.0, balanced_M(100.0))
    assert d.residual <= c_emp * afe_envelope(100.0, d.M)


@pytest.mark.parametrize("t,y", [(300.0, 0.0), (1234.5, 0.25), (77.0, 0.8)])
def test_two_splits_agree(t, y):
    a = afe_decompose(t, y, balanced_M(t))
    b = afe_decompose(t, y, 3.0 * balanced_M(t))
    c = chi_factor(t)
    gap = abs((a.S1 + c * a.S2) - (b.S1 + c * b.S2))
    assert gap <= a.residual + b.residual + 1e-9


def test_invariants():
    d = afe_decompose(500.0, 0.5, 4.0)
    assert abs(TWO_PI * d.M * d.N - d.t) < 1e-12 * d.t
    with pytest.raises(InvalidRange):
        afe_decompose(6.0, 0.0, 1.0)
    with pytest.raises(InvalidRange):
        afe_decompose(100.0, 0.0, 0.5)
    with pytest.raises(InvalidRange):
        afe_decompose(100.0, 0.0, 101.0)


def test_scan_stability():
    rows = residual_envelope_scan(10, 1000, 100, 0.0)
    ratios = np.array([r[5] for r in rows])
    assert len(rows) == 100 and np.all(np.isfinite(ratios))
    assert ratios.max() / ratios.min() < 10
    small = residual_envelope_scan(TWO_PI, TWO_PI + 1, 2, 0.4)
    assert len(small) == 2 and all(math.isfinite(r[5]) for r in small)


def test_scan_uniform_in_shift():
    c0 = max(r[5] for r in residual_envelope_scan(10, 1000, 100, 0.0))
    c5 = max(r[5] for r in residual_envelope_scan(10, 1000, 100, 0.5))
    assert 0.25 < c0 / c5 < 4


def test_fixed_policy():
    rows = residual_envelope_scan(50, 400, 5, 0.1, "fixed", M=2.0)
    assert all(r[1] == 2.0 for r in rows)
    assert all(abs(r[4] - afe_envelope(r[0], 2.0)) < 1e-12 for r in rows)


def test_kernel_examples():
    for t in (TWO_PI, 100.0, 5000.0):
        assert kernel_eval(t, 0.0) == complex(kernel_cutoff(t), 0)
    assert abs(kernel_eval(8 * math.pi, 0.5)) < 1e-15
    # near-integer guard uses direct summation
    assert abs(kernel_eval(1000.0, 1e-10) - kernel_cutoff(1000.0)) < 1e-6


@settings(max_examples=300, deadline=None)
@given(st.floats(TWO_PI, 1e6), st.floats(0.0, 0.9999999))
def test_kernel_bound_property(t, u):
    assert abs(kernel_eval(t, u)) <= kernel_bound(t, u)


def test_kernel_closed_form_vs_direct():
    rng = np.random.default_rng(4)
    for t, u in zip(rng.uniform(TWO_PI, 1e4, 50), rng.random(50)):
        n = np.arange(1, kernel_cutoff(t) + 1)
        assert abs(kernel_eval(t, u) - e(-n * u).sum()) < 1e-11


def test_kernel_l1():
    assert abs(kernel_l1(TWO_PI + 0.1, 1000) - 1.0) < 1e-12
    t = TWO_PI * 1e4
    a, b = kernel_l1(t, 20000), kernel_l1(t, 40000)
    assert abs(a - b) / a < 0.005
    assert a <= 0.5 * math.log(t)
    ratios = [kernel_l1(TWO_PI * 4 ** j, 20000) / math.log(TWO_PI * 4 ** j) for j in range(1, 8)]
    assert max(ratios) < 1.0 and all(np.diff(ratios) < 0.01)
    with pytest.raises(InvalidRange):
        kernel_l1(100.0, 10)


@pytest.mark.parametrize("z", range(-20, 21))
def test_grid_orthogonality(z):
    v = grid_orthogonality(z, 21)
    if z == 0:
        assert abs(v - 1) < 1e-15
    else:
        assert abs(v) <= 1e-12


def test_selection_identity():
    assert selection_identity_check(18 * math.pi, 0.0, 18 * math.pi, 64) <= 1e-10
    assert selection_identity_check(TWO_PI, 0.6, TWO_PI, 10) <= 1e-12
    a = selection_identity_check(400.0, 0.2, 900.0, 200)
    b = selection_identity_check(400.0, 0.2, 900.0, 400)
    assert a < 1e-12 and b < 1e-12
    with pytest.raises(NodesTooFew):
        selection_identity_check(TWO_PI, 0.0, TWO_PI, 9)
    with pytest.raises(InvalidRange):
        selection_identity_check(100.0, 0.0, 50.0, 100)
