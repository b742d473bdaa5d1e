"""Water-vapour absorption in the 200-400 GHz window.

Simplified molecular absorption model: a cubic baseline plus two Lorentzian
water-vapour lines (near 325 GHz and 380 GHz), driven by the volume mixing
ratio of water vapour. The absorption coefficient is returned in 1/m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# Saturated vapour pressure (Buck-type fit), pressure terms in hPa
_Q1 = 6.1121
_Q2 = 1.0007
_Q3 = 3.46e-6
_Q4 = 17.502
_Q5 = 273.15
_Q6 = 32.18

# Baseline polynomial in frequency (Hz)
_C0 = -6.36e-3
_C1 = 9.06e-14
_C2 = -3.94e-25
_C3 = 5.54e-37

# Line centres in wavenumber (1/cm)
LINE1_WAVENUMBER = 10.835
LINE2_WAVENUMBER = 12.664

F_MIN = 100e9
F_MAX = 450e9
VALID_BAND = (200e9, 400e9)


@dataclass(frozen=True)
class AtmosphericConditions:
    """Temperature (K), pressure (Pa) and relative humidity (%)."""

    temperature: float = 296.0
    pressure: float = 101_325.0
    relative_humidity: float = 50.0

    def __post_init__(self):
        if not self.temperature > _Q6:
            raise ValueError(f"temperature must exceed {_Q6} K, got {self.temperature}")
        if not self.pressure > 0:
            raise ValueError(f"pressure must be positive, got {self.pressure}")
        if not 0 <= self.relative_humidity <= 100:
            raise ValueError(f"relative_humidity must lie in [0, 100], got {self.relative_humidity}")


@dataclass(frozen=True)
class AbsorptionBreakdown:
    """Per-term absorption coefficients in 1/m.

    ``coefficient`` is ``g_term + y1_term + y2_term`` unless that sum is
    negative, in which case it is clamped to 0 and ``clamped`` is set.
    """

    g_term: float
    y1_term: float
    y2_term: float
    coefficient: float
    mixing_ratio: float
    clamped: bool = False


def saturated_water_vapor_pressure(temperature: float, pressure: float) -> float:
    """Saturated water vapour partial pressure in hPa.

    ``pressure`` is in Pa and enters through the weak enhancement factor.
    """
    if not temperature > _Q6:
        raise ValueError(f"temperature must exceed {_Q6} K, got {temperature}")
    if not pressure > 0:
        raise ValueError(f"pressure must be positive, got {pressure}")
    p_hpa = pressure / 100.0
    return _Q1 * (_Q2 + _Q3 * p_hpa) * math.exp(_Q4 * (temperature - _Q5) / (temperature - _Q6))


def volume_mixing_ratio(conditions: AtmosphericConditions) -> float:
    p_w = saturated_water_vapor_pressure(conditions.temperature, conditions.pressure)
    return conditions.relative_humidity / 100.0 * p_w / (conditions.pressure / 100.0)


def wavenumber(frequency: float) -> float:
    """Frequency in Hz to wavenumber in 1/cm."""
    return frequency / (100.0 * SPEED_OF_LIGHT)


def _baseline(f: float) -> float:
    return _C0 + _C1 * f + _C2 * f**2 + _C3 * f**3


def _line1(nu: float, k: float) -> float:
    return 0.2205 * nu * (0.1303 * nu + 0.0294) / ((0.4093 * nu + 0.0925) ** 2 + (k - LINE1_WAVENUMBER) ** 2)


def _line2(nu: float, k: float) -> float:
    return 2.014 * nu * (0.1702 * nu + 0.0303) / ((0.537 * nu + 0.0956) ** 2 + (k - LINE2_WAVENUMBER) ** 2)


def absorption_coefficient(frequency: float, conditions: AtmosphericConditions) -> AbsorptionBreakdown:
    """Molecular absorption coefficient at ``frequency`` (Hz).

    Accepts 100-450 GHz; the fit itself is intended for 200-400 GHz.

    >>> round(absorption_coefficient(300e9, AtmosphericConditions()).coefficient, 6)
    0.000583
    """
    if not F_MIN <= frequency <= F_MAX:
        raise ValueError(f"frequency {frequency:g} Hz outside the supported {F_MIN:g}-{F_MAX:g} Hz range")
    nu = volume_mixing_ratio(conditions)
    k = wavenumber(frequency)
    g = _baseline(frequency)
    y1 = _line1(nu, k)
    y2 = _line2(nu, k)
    total = g + y1 + y2
    clamped = total < 0.0
    return AbsorptionBreakdown(
        g_term=g,
        y1_term=y1,
        y2_term=y2,
        coefficient=0.0 if clamped else total,
        mixing_ratio=nu,
        clamped=clamped,
    )


def absorption_gain(frequency: float, conditions: AtmosphericConditions, distance: float) -> float:
    """Amplitude gain ``exp(-k_a d / 2)`` over ``distance`` metres."""
    if not distance >= 0:
        raise ValueError(f"distance must be non-negative, got {distance}")
    k_a = absorption_coefficient(frequency, conditions).coefficient
    return math.exp(-0.5 * k_a * distance)
