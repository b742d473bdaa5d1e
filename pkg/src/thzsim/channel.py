"""Deterministic and misalignment channel gains for a LOS THz link.

The composite amplitude gain is ``h = h_p * h_a * h_m``: Friis spreading,
molecular absorption, and a random pointing-error loss for a Gaussian beam
falling on a circular aperture with Rayleigh-distributed radial offset.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .atmosphere import SPEED_OF_LIGHT, AtmosphericConditions, absorption_gain


class JitterInterpretation(str, enum.Enum):
    VARIANCE = "variance"
    STD_DEV = "std_dev"


@dataclass(frozen=True)
class LinkConfig:
    """Full description of one link.

    Attributes:
        frequency: carrier frequency in Hz.
        gain_tx, gain_rx: antenna gains in dBi.
        distance: TX-RX separation in m.
        aperture_radius: receiver detection radius ``a`` in m.
        beam_waist: TX beam footprint radius ``w_d`` at the receiver, in m.
        jitter_value: per-axis displacement variance (m^2) or standard
            deviation (m), depending on ``jitter_interpretation``.
    """

    frequency: float = 300e9
    gain_tx: float = 55.0
    gain_rx: float = 55.0
    distance: float = 50.0
    aperture_radius: float = 0.1
    beam_waist: float = 0.6
    jitter_value: float = 0.01
    jitter_interpretation: JitterInterpretation = JitterInterpretation.VARIANCE
    conditions: AtmosphericConditions = field(default_factory=AtmosphericConditions)

    def __post_init__(self):
        object.__setattr__(self, "jitter_interpretation", JitterInterpretation(self.jitter_interpretation))
        for name in ("frequency", "distance", "aperture_radius", "beam_waist", "jitter_value"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not self.aperture_radius < self.beam_waist:
            raise ValueError("aperture_radius must be smaller than beam_waist")

    @property
    def sigma_r(self) -> float:
        return jitter_to_sigma(self.jitter_value, self.jitter_interpretation)

    @property
    def jitter_variance(self) -> float:
        return self.sigma_r**2


@dataclass(frozen=True)
class MisalignmentModel:
    u: float
    w_eq: float
    a0: float
    gamma: float
    sigma_r: float

    @property
    def gamma_sq(self) -> float:
        return self.gamma**2


@dataclass(frozen=True)
class DeterministicGains:
    h_p: float
    h_a: float
    product: float


def jitter_to_sigma(jitter_value: float, interpretation) -> float:
    """Per-axis displacement standard deviation in metres."""
    if JitterInterpretation(interpretation) is JitterInterpretation.STD_DEV:
        return float(jitter_value)
    return math.sqrt(jitter_value)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def fspl_gain(frequency: float, gain_tx: float, gain_rx: float, distance: float) -> float:
    """Friis amplitude gain ``c sqrt(G_tx G_rx) / (4 pi d f)``; gains in dBi."""
    if not frequency > 0:
        raise ValueError(f"frequency must be positive, got {frequency}")
    if not distance > 0:
        raise ValueError(f"distance must be positive, got {distance}")
    g = math.sqrt(db_to_linear(gain_tx) * db_to_linear(gain_rx))
    return SPEED_OF_LIGHT * g / (4.0 * math.pi * distance * frequency)


def _beam_ratio(u: float) -> float:
    # sqrt(pi) erf(u) / (2 u exp(-u^2)), which tends to 1 as u -> 0
    if u < 1e-4:
        return 1.0 + 2.0 * u**2 / 3.0
    return math.sqrt(math.pi) * math.erf(u) / (2.0 * u * math.exp(-(u**2)))


def build_misalignment_model(
    aperture_radius: float,
    beam_waist: float,
    jitter_value: float,
    jitter_interpretation=JitterInterpretation.VARIANCE,
) -> MisalignmentModel:
    """Pointing-error fading parameters for a given geometry and jitter.

    A ``jitter_value`` of 0 gives the degenerate no-jitter model with
    ``gamma = inf``; only the Monte Carlo paths accept it.
    """
    if not 0 < aperture_radius < beam_waist:
        raise ValueError("need 0 < aperture_radius < beam_waist")
    if not jitter_value >= 0:
        raise ValueError(f"jitter_value must be non-negative, got {jitter_value}")
    u = math.sqrt(math.pi) * aperture_radius / (math.sqrt(2.0) * beam_waist)
    w_eq = beam_waist * math.sqrt(_beam_ratio(u))
    a0 = math.erf(u) ** 2
    sigma_r = jitter_to_sigma(jitter_value, jitter_interpretation)
    gamma = w_eq / (2.0 * sigma_r) if sigma_r > 0 else math.inf
    return MisalignmentModel(u=u, w_eq=w_eq, a0=a0, gamma=gamma, sigma_r=sigma_r)


def misalignment_model(config: LinkConfig) -> MisalignmentModel:
    return build_misalignment_model(
        config.aperture_radius, config.beam_waist, config.jitter_value, config.jitter_interpretation
    )


def misalignment_gain(r, model: MisalignmentModel):
    """Fraction of power collected at radial offset ``r`` (scalar or array)."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radial offset must be non-negative")
    out = model.a0 * np.exp(-2.0 * r_arr**2 / model.w_eq**2)
    return float(out) if out.ndim == 0 else out


def misalignment_pdf(x, model: MisalignmentModel):
    """Density of the misalignment gain, supported on ``(0, a0]``."""
    g2 = model.gamma_sq
    x_arr = np.asarray(x, dtype=float)
    inside = (x_arr > 0) & (x_arr <= model.a0)
    safe = np.where(inside, x_arr, model.a0)
    log_pdf = math.log(g2) - g2 * math.log(model.a0) + (g2 - 1.0) * np.log(safe)
    out = np.where(inside, np.exp(log_pdf), 0.0)
    return float(out) if out.ndim == 0 else out


def misalignment_cdf(x, model: MisalignmentModel):
    """``P(h_m <= x) = (x / a0)^gamma^2`` on the support."""
    x_arr = np.clip(np.asarray(x, dtype=float), 0.0, model.a0)
    out = (x_arr / model.a0) ** model.gamma_sq
    return float(out) if out.ndim == 0 else out


def misalignment_mean(model: MisalignmentModel) -> float:
    g2 = model.gamma_sq
    return model.a0 * g2 / (g2 + 1.0)


def sample_pointing_error(rng: np.random.Generator, sigma_r: float, size=None):
    """Rayleigh radial offsets by inverse transform, ``sigma_r sqrt(-2 ln U)``.

    ``U`` is uniform on (0, 1]. ``size=None`` returns a float.
    """
    if not sigma_r >= 0:
        raise ValueError(f"sigma_r must be non-negative, got {sigma_r}")
    u = 1.0 - rng.random(size)
    r = sigma_r * np.sqrt(-2.0 * np.log(u))
    return float(r) if size is None else r


def deterministic_gains(config: LinkConfig) -> DeterministicGains:
    h_p = fspl_gain(config.frequency, config.gain_tx, config.gain_rx, config.distance)
    h_a = absorption_gain(config.frequency, config.conditions, config.distance)
    return DeterministicGains(h_p=h_p, h_a=h_a, product=h_p * h_a)
