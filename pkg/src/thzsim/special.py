"""Special functions used by the error-rate formulas.

The lower incomplete gamma function is evaluated in the log domain so the
closed-form SER expressions stay finite for shape parameters in the
hundreds or thousands, where ``Gamma(s)`` and ``x**s`` overflow doubles.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

_EPS = 1e-17
_TINY = 1e-300
_MAX_ITER = 1_000_000


def _check_gamma_args(s: float, x: float) -> None:
    if not (s > 0.0) or not math.isfinite(s):
        raise ValueError(f"shape must be positive and finite, got {s!r}")
    if not (x >= 0.0):
        raise ValueError(f"argument must be non-negative, got {x!r}")


def _log_series(s: float, x: float) -> float:
    # gamma(s, x) = x^s e^-x * sum_n x^n / (s (s+1) ... (s+n))
    term = 1.0 / s
    total = term
    denom = s
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if term < total * _EPS:
            return s * math.log(x) - x + math.log(total)
    raise ArithmeticError(f"incomplete gamma series did not converge (s={s}, x={x})")


def _log_upper_cf(s: float, x: float) -> float:
    # Modified Lentz evaluation of the continued fraction for Gamma(s, x).
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return s * math.log(x) - x + math.log(h)
    raise ArithmeticError(f"incomplete gamma continued fraction did not converge (s={s}, x={x})")


def log_lower_incomplete_gamma(s: float, x: float) -> float:
    """Natural log of the lower incomplete gamma function ``gamma(s, x)``.

    Uses the power series for ``x < s + 1`` and the continued fraction for
    the complementary function otherwise. Returns ``-inf`` at ``x == 0``.
    """
    s = float(s)
    x = float(x)
    _check_gamma_args(s, x)
    if x == 0.0:
        return -math.inf
    if math.isinf(x):
        return math.lgamma(s)
    if x < s + 1.0:
        return _log_series(s, x)
    log_q = _log_upper_cf(s, x) - math.lgamma(s)
    return math.lgamma(s) + math.log1p(-math.exp(log_q))


def lower_incomplete_gamma(s: float, x: float) -> float:
    """Lower incomplete gamma ``int_0^x t^(s-1) e^-t dt`` (not regularized).

    Returns ``inf`` when the value exceeds the double range; use
    :func:`log_lower_incomplete_gamma` for very large shapes.
    """
    log_val = log_lower_incomplete_gamma(s, x)
    if log_val > 709.78:
        return math.inf
    return math.exp(log_val)


def regularized_lower_gamma(s: float, x: float) -> float:
    """``P(s, x) = gamma(s, x) / Gamma(s)``."""
    return math.exp(log_lower_incomplete_gamma(s, x) - math.lgamma(s))


def q_function(x):
    """Gaussian tail probability ``Q(x) = P(N(0,1) > x)``, via erfc."""
    return 0.5 * _sp.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def log_q_function(x):
    """``log Q(x)``, accurate deep into the tail."""
    return _sp.log_ndtr(-np.asarray(x, dtype=float))
