"""Symbol error rate of BPSK/QPSK over the misaligned THz channel.

Closed forms come from averaging the Chernoff-bounded conditional error
probability, ``Q(x) <= exp(-x^2/2) / 2``, over the power-law density of the
misalignment gain. With

    A = avg_snr * a0^2 * (h_p h_a)^2,     B = gamma^2 / 2

the BPSK average is ``B / (2 A^B) * lgamma(B, A)`` and the QPSK average is
``2^B B / A^B * lgamma(B, A/2) - B / (4 A^B) * lgamma(B, A)``, where
``lgamma(s, x)`` is the lower incomplete gamma function of shape ``s`` at
argument ``x``.

:func:`avg_ser_quadrature` evaluates the same averages by direct numerical
integration, either with the bound (to cross-check the closed forms) or
with the exact ``Q`` (the true model average, used as ground truth).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .channel import DeterministicGains, MisalignmentModel
from .special import log_lower_incomplete_gamma, log_q_function, q_function

_LOG2 = math.log(2.0)
_LOG4 = math.log(4.0)


class ModulationScheme(str, enum.Enum):
    BPSK = "bpsk"
    QPSK = "qpsk"


class QMode(str, enum.Enum):
    EXACT_Q = "exact_q"
    CHERNOFF_Q = "chernoff_q"


class QuadratureError(ArithmeticError):
    """Raised when the averaging integral fails to converge."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (error estimate {error_estimate:.3g})")
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class SerParams:
    a_param: float
    b_param: float


def instantaneous_snr(avg_snr, channel_gain):
    return np.abs(channel_gain) ** 2 * avg_snr


def instantaneous_ser(scheme, snr):
    """Exact conditional SER at instantaneous SNR ``snr`` (scalar or array)."""
    scheme = ModulationScheme(scheme)
    snr = np.asarray(snr, dtype=float)
    if scheme is ModulationScheme.BPSK:
        out = q_function(np.sqrt(2.0 * snr))
    else:
        q = q_function(np.sqrt(snr))
        out = q * (2.0 - q)
    return float(out) if out.ndim == 0 else out


def ser_params(avg_snr: float, gains: DeterministicGains, model: MisalignmentModel) -> SerParams:
    return SerParams(
        a_param=avg_snr * model.a0**2 * gains.product**2,
        b_param=model.gamma_sq / 2.0,
    )


def _check_params(params: SerParams) -> tuple[float, float]:
    a, b = float(params.a_param), float(params.b_param)
    if not a > 0:
        raise ValueError(f"A must be positive, got {a}")
    if not (b > 0 and math.isfinite(b)):
        raise ValueError(f"B must be positive and finite, got {b}")
    return a, b


def log_avg_ser_bpsk_closed(params: SerParams) -> float:
    a, b = _check_params(params)
    return math.log(b) - _LOG2 - b * math.log(a) + log_lower_incomplete_gamma(b, a)


def log_avg_ser_qpsk_closed(params: SerParams) -> float:
    a, b = _check_params(params)
    log_a = math.log(a)
    first = b * _LOG2 + math.log(b) - b * log_a + log_lower_incomplete_gamma(b, a / 2.0)
    second = math.log(b) - _LOG4 - b * log_a + log_lower_incomplete_gamma(b, a)
    if second >= first:
        return -math.inf
    return min(first + math.log1p(-math.exp(second - first)), 0.0)


def avg_ser_bpsk_closed(params: SerParams) -> float:
    return math.exp(log_avg_ser_bpsk_closed(params))


def avg_ser_qpsk_closed(params: SerParams) -> float:
    return math.exp(log_avg_ser_qpsk_closed(params))


def log_avg_ser_closed(scheme, params: SerParams) -> float:
    if ModulationScheme(scheme) is ModulationScheme.BPSK:
        return log_avg_ser_bpsk_closed(params)
    return log_avg_ser_qpsk_closed(params)


def avg_ser_closed(scheme, params: SerParams) -> float:
    return math.exp(log_avg_ser_closed(scheme, params))


def _log_conditional_ser(scheme: ModulationScheme, q_mode: QMode, snr):
    if scheme is ModulationScheme.BPSK:
        if q_mode is QMode.CHERNOFF_Q:
            return -_LOG2 - snr
        return log_q_function(np.sqrt(2.0 * snr))
    if q_mode is QMode.CHERNOFF_Q:
        log_q = -_LOG2 - snr / 2.0
    else:
        log_q = log_q_function(np.sqrt(snr))
    return log_q + np.log(2.0 - np.exp(log_q))


def log_avg_ser_quadrature(
    scheme,
    avg_snr: float,
    gains: DeterministicGains,
    model: MisalignmentModel,
    q_mode=QMode.EXACT_Q,
) -> float:
    """Log of the average SER by adaptive quadrature over the gain density.

    Integrates in ``w = -gamma^2 ln(x / a0)``, under which the misalignment
    density becomes ``exp(-w) dw`` on ``[0, inf)``. The integrand is scaled
    by its peak so that results far below the double range stay accurate.
    """
    scheme = ModulationScheme(scheme)
    q_mode = QMode(q_mode)
    if not avg_snr > 0:
        raise ValueError(f"avg_snr must be positive, got {avg_snr}")
    if math.isinf(model.gamma):
        snr = avg_snr * (gains.product * model.a0) ** 2
        return float(_log_conditional_ser(scheme, q_mode, np.float64(snr)))

    g2 = model.gamma_sq
    peak_snr = avg_snr * (gains.product * model.a0) ** 2

    def log_f(w):
        snr = peak_snr * np.exp(-2.0 * np.asarray(w, dtype=float) / g2)
        return _log_conditional_ser(scheme, q_mode, snr) - w

    # The Chernoff BPSK integrand peaks near w = B ln(A/B), width ~ sqrt(B).
    b = g2 / 2.0
    centre = b * math.log(peak_snr / b) if peak_snr > b else 0.0
    width = math.sqrt(b) + 1.0
    upper = centre + 60.0 * width + 60.0
    grid = np.linspace(0.0, upper, 4001)
    vals = log_f(grid)
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(lambda w: -float(log_f(w)), bounds=(lo, hi), method="bounded")
        w_peak, log_peak = float(res.x), -float(res.fun)
        if log_peak < vals[i]:
            w_peak, log_peak = float(grid[i]), float(vals[i])
    else:
        w_peak, log_peak = float(grid[i]), float(vals[i])

    def scaled(w):
        return math.exp(float(log_f(w)) - log_peak)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr, _info, *message = integrate.quad(
            scaled,
            0.0,
            upper,
            points=[w_peak] if 0.0 < w_peak < upper else None,
            epsabs=1e-12,
            epsrel=1e-12,
            limit=500,
            full_output=1,
        )
    # quad only appends a message when it flags a problem
    if message and abserr > 1e-9 * value:
        raise QuadratureError("average SER quadrature did not converge", abserr)
    return log_peak + math.log(value)


def avg_ser_quadrature(
    scheme,
    avg_snr: float,
    gains: DeterministicGains,
    model: MisalignmentModel,
    q_mode=QMode.EXACT_Q,
) -> float:
    return math.exp(log_avg_ser_quadrature(scheme, avg_snr, gains, model, q_mode))
