import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from thzsim.special import (
    log_lower_incomplete_gamma,
    log_q_function,
    lower_incomplete_gamma,
    q_function,
    regularized_lower_gamma,
)


def log_quad_oracle(s, x):
    # t = x v on [0, 1]; tanh-sinh at 40 digits with a break at the integrand peak
    with mpmath.workdps(40):
        s, x = mpmath.mpf(s), mpmath.mpf(x)
        peak = (s - 1) / x
        width = mpmath.sqrt(abs(s - 1)) / x
        pts = sorted({mpmath.mpf(0), mpmath.mpf(1)} | {p for k in range(-8, 9) if 0 < (p := peak + k * width) < 1})
        inner = mpmath.quad(lambda v: v ** (s - 1) * mpmath.exp(-x * v), pts, maxdegree=12)
        return float(s * mpmath.log(x) + mpmath.log(inner))


@pytest.mark.parametrize("x", [0.0, 1e-8, 0.3, 1.0, 7.5, 40.0])
def test_shape_one_closed_form(x):
    assert lower_incomplete_gamma(1.0, x) == pytest.approx(-math.expm1(-x), rel=1e-14, abs=0)


@pytest.mark.parametrize("x", [1e-6, 0.2, 1.0, 2.0, 9.0, 30.0])
def test_shape_half_is_erf(x):
    expected = math.sqrt(math.pi) * math.erf(math.sqrt(x))
    assert lower_incomplete_gamma(0.5, x) == pytest.approx(expected, rel=1e-13)


def test_integration_by_parts_value():
    assert lower_incomplete_gamma(2.0, 1.0) == pytest.approx(1 - 2 / math.e, rel=1e-14)
    assert lower_incomplete_gamma(2.0, 1.0) == pytest.approx(0.264241117657115, rel=1e-13)


S_VALUES = [0.3, 0.5, 1.0, 2.5, 7.0, 20.0, 49.5]
X_VALUES = [1e-3, 0.1, 1.0, 5.0, 19.0, 21.5, 50.0, 120.0]


@pytest.mark.parametrize("s", S_VALUES)
@pytest.mark.parametrize("x", X_VALUES)
def test_against_quadrature_oracle(s, x):
    expected = log_quad_oracle(s, x)
    got = log_lower_incomplete_gamma(s, x)
    assert abs(math.expm1(got - expected)) <= 1e-12


def test_scipy_quad_agrees_at_moderate_shape():
    expected, _ = integrate.quad(lambda t: t**3.5 * math.exp(-t), 0, 6.0, epsabs=0, epsrel=1e-13)
    assert lower_incomplete_gamma(4.5, 6.0) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("s,x", [(1e4, 1e4), (1e4, 9.8e3), (1e4, 1.05e4), (3e3, 10.0), (500.0, 1e6)])
def test_large_shape_stays_finite(s, x):
    with mpmath.workdps(30):
        expected = float(mpmath.log(mpmath.gammainc(s, 0, x)))
    got = log_lower_incomplete_gamma(s, x)
    assert math.isfinite(got)
    assert got == pytest.approx(expected, rel=1e-12)
    assert lower_incomplete_gamma(s, x) == math.inf


def test_zero_argument():
    assert log_lower_incomplete_gamma(3.0, 0.0) == -math.inf
    assert lower_incomplete_gamma(3.0, 0.0) == 0.0


def test_regularized_limits():
    assert regularized_lower_gamma(4.0, 1e4) == pytest.approx(1.0, abs=1e-15)
    assert regularized_lower_gamma(4.0, 1e-3) < 1e-12


@pytest.mark.parametrize("s,x", [(0.0, 1.0), (-1.0, 1.0), (2.0, -0.5), (math.nan, 1.0), (1.0, math.nan)])
def test_domain_errors(s, x):
    with pytest.raises(ValueError):
        lower_incomplete_gamma(s, x)


@settings(max_examples=300, deadline=None)
@given(s=st.floats(0.5, 100.0), x=st.floats(0.1, 200.0))
def test_recurrence(s, x):
    lhs = lower_incomplete_gamma(s + 1.0, x)
    rhs = s * lower_incomplete_gamma(s, x) - math.exp(s * math.log(x) - x)
    assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


@settings(max_examples=100, deadline=None)
@given(s=st.floats(0.1, 300.0), x1=st.floats(0.0, 500.0), x2=st.floats(0.0, 500.0))
def test_monotone_in_argument(s, x1, x2):
    lo, hi = sorted((x1, x2))
    assert log_lower_incomplete_gamma(s, lo) <= log_lower_incomplete_gamma(s, hi) + 1e-12


def test_q_function_values():
    assert q_function(0.0) == 0.5
    assert q_function(1.0) == pytest.approx(0.158655253931457, rel=1e-14)
    assert np.exp(log_q_function(40.0)) == 0.0
    assert log_q_function(40.0) == pytest.approx(float(mpmath.log(mpmath.erfc(40 / mpmath.sqrt(2)) / 2)), rel=1e-12)
