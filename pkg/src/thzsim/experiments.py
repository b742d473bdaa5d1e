"""SER-vs-SNR sweeps over distance and jitter, plus curve comparison."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .atmosphere import VALID_BAND
from .channel import LinkConfig, deterministic_gains, misalignment_model
from .montecarlo import McConfig, McMode, run_mc
from .ser import ModulationScheme, QMode, avg_ser_closed, avg_ser_quadrature, ser_params

DEFAULT_SNR_GRID = tuple(float(s) for s in range(0, 61, 2))
DEFAULT_DISTANCES = (30.0, 50.0, 80.0)
DEFAULT_JITTERS = (0.01, 0.025, 0.05)

MAX_DISTANCE = 100.0
MAX_JITTER_VARIANCE = 0.05
BEAM_RATIO_RANGE = (6.0, 10.0)

MIN_MC_ERRORS = 100
MC_FEASIBLE_SER = 1e-6
MC_INFEASIBLE = "MC-infeasible at desk scale"


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE_EXACT = "quadrature_exact"
    MC_SYMBOL = "mc_symbol"
    MC_SEMI = "mc_semi"


class IncomparableCurves(ValueError):
    """The curves do not both cross the requested SER level."""


@dataclass(frozen=True)
class SweepSpec:
    snr_grid: Sequence[float] = DEFAULT_SNR_GRID
    distances: Sequence[float] = DEFAULT_DISTANCES
    jitter_values: Sequence[float] = DEFAULT_JITTERS
    schemes: Sequence[ModulationScheme] = (ModulationScheme.BPSK, ModulationScheme.QPSK)
    methods: Sequence[Method] = (Method.CLOSED_FORM, Method.QUADRATURE_EXACT, Method.MC_SEMI)
    base: LinkConfig = field(default_factory=LinkConfig)
    mc: McConfig = field(default_factory=McConfig)
    # cap on auto-scaled symbol-level trials per point
    max_symbol_trials: int = 100_000_000

    def __post_init__(self):
        for name in ("snr_grid", "distances", "jitter_values", "schemes", "methods"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} must not be empty")
        object.__setattr__(self, "snr_grid", tuple(float(s) for s in self.snr_grid))
        object.__setattr__(self, "distances", tuple(float(d) for d in self.distances))
        object.__setattr__(self, "jitter_values", tuple(float(j) for j in self.jitter_values))
        object.__setattr__(self, "schemes", tuple(ModulationScheme(s) for s in self.schemes))
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        if any(b <= a for a, b in zip(self.snr_grid, self.snr_grid[1:])):
            raise ValueError("snr_grid must be strictly increasing")


@dataclass(frozen=True)
class SweepRow:
    scheme: ModulationScheme
    method: Method
    snr_db: float
    distance_m: float
    jitter_value: float
    ser: float
    half_width: float
    a_param: float
    b_param: float
    error: str | None = None


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _evaluate(spec, scheme, method, snr_db, gains, model, workers):
    avg_snr = db_to_linear(snr_db)
    if method is Method.CLOSED_FORM:
        return avg_ser_closed(scheme, ser_params(avg_snr, gains, model)), 0.0
    if method is Method.QUADRATURE_EXACT:
        return avg_ser_quadrature(scheme, avg_snr, gains, model, QMode.EXACT_Q), 0.0
    if method is Method.MC_SEMI:
        mc = replace(spec.mc, mode=McMode.SEMI_ANALYTIC)
        est = run_mc(mc, scheme, avg_snr, gains, model, workers=workers)
        return est.ser, est.half_width

    bound = avg_ser_closed(scheme, ser_params(avg_snr, gains, model))
    expected = avg_ser_quadrature(scheme, avg_snr, gains, model, QMode.EXACT_Q)
    needed = math.ceil(MIN_MC_ERRORS / expected) if expected > 0 else math.inf
    if bound < MC_FEASIBLE_SER or needed > spec.max_symbol_trials:
        raise ArithmeticError(MC_INFEASIBLE)
    mc = replace(spec.mc, mode=McMode.SYMBOL_LEVEL, num_trials=max(spec.mc.num_trials, needed))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        est = run_mc(mc, scheme, avg_snr, gains, model, workers=workers)
    return est.ser, est.half_width


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """Evaluate every (scheme, method, distance, jitter, snr) combination.

    Rows come back in exactly that nesting order. A failing point is kept
    as a row with ``ser = nan`` and the message in ``error``.
    """
    links = {}
    for d in spec.distances:
        for j in spec.jitter_values:
            try:
                cfg = replace(spec.base, distance=d, jitter_value=j)
                links[d, j] = (deterministic_gains(cfg), misalignment_model(cfg), None)
            except (ValueError, ArithmeticError) as exc:
                links[d, j] = (None, None, str(exc))

    rows = []
    for scheme in spec.schemes:
        for method in spec.methods:
            for d in spec.distances:
                for j in spec.jitter_values:
                    gains, model, link_error = links[d, j]
                    for snr_db in spec.snr_grid:
                        if link_error is not None:
                            rows.append(SweepRow(scheme, method, snr_db, d, j, math.nan, 0.0,
                                                 math.nan, math.nan, link_error))
                            continue
                        params = ser_params(db_to_linear(snr_db), gains, model)
                        try:
                            ser, half = _evaluate(spec, scheme, method, snr_db, gains, model, workers)
                            error = None
                        except (ValueError, ArithmeticError) as exc:
                            ser, half, error = math.nan, 0.0, str(exc)
                        rows.append(SweepRow(scheme, method, snr_db, d, j, ser, half,
                                             params.a_param, params.b_param, error))
    return rows


def _curve_points(curve):
    pts = []
    for row in curve:
        snr, ser = (row.snr_db, row.ser) if hasattr(row, "snr_db") else row
        if math.isfinite(ser) and ser > 0:
            pts.append((float(snr), float(ser)))
    pts.sort()
    return pts


def snr_at_ser(curve, target_ser: float) -> float:
    """SNR (dB) at which a nonincreasing SER curve crosses ``target_ser``.

    ``curve`` holds rows (with ``snr_db`` and ``ser``) or ``(snr_db, ser)``
    pairs. Interpolation is linear in ``log10(ser)``.
    """
    pts = _curve_points(curve)
    log_t = math.log10(target_ser)
    for (s0, p0), (s1, p1) in zip(pts, pts[1:]):
        if p0 >= target_ser >= p1:
            if p0 == p1:
                return s0
            l0, l1 = math.log10(p0), math.log10(p1)
            return s0 + (log_t - l0) / (l1 - l0) * (s1 - s0)
    raise IncomparableCurves(f"curve does not bracket SER {target_ser:g}")


def snr_gap_at_ser(curve_a, curve_b, target_ser: float) -> float:
    """Horizontal distance in dB between two curves at equal SER."""
    return abs(snr_at_ser(curve_a, target_ser) - snr_at_ser(curve_b, target_ser))


@dataclass(frozen=True)
class GapResult:
    scheme: ModulationScheme
    distance_m: float
    jitter_value: float
    target_ser: float
    gap_db: float | None


def gap_report(rows, method_a, method_b, levels) -> list[GapResult]:
    """Per-level SNR gaps between two methods for every curve in a sweep.

    ``gap_db`` is ``None`` where the two curves do not share the level.
    """
    method_a, method_b = Method(method_a), Method(method_b)
    curves = {}
    for row in rows:
        curves.setdefault((row.scheme, row.distance_m, row.jitter_value, row.method), []).append(row)
    out = []
    keys = sorted({k[:3] for k in curves}, key=lambda k: (k[0].value, k[1], k[2]))
    for scheme, d, j in keys:
        a = curves.get((scheme, d, j, method_a))
        b = curves.get((scheme, d, j, method_b))
        if a is None or b is None:
            continue
        for level in levels:
            try:
                gap = snr_gap_at_ser(a, b, level)
            except IncomparableCurves:
                gap = None
            out.append(GapResult(scheme, d, j, float(level), gap))
    return out


def validity_check(config: LinkConfig) -> list[str]:
    """Warnings for a link outside the range where the closed forms hold."""
    warns = []
    if config.distance > MAX_DISTANCE:
        warns.append(f"distance {config.distance:g} m exceeds {MAX_DISTANCE:g} m")
    if config.jitter_variance > MAX_JITTER_VARIANCE * (1 + 1e-12):
        warns.append(f"jitter variance {config.jitter_variance:g} m^2 exceeds {MAX_JITTER_VARIANCE:g} m^2")
    ratio = config.beam_waist / config.aperture_radius
    lo, hi = BEAM_RATIO_RANGE
    if not lo * (1 - 1e-12) <= ratio <= hi * (1 + 1e-12):
        warns.append(f"beam radius ratio {ratio:g} outside [{lo:g}, {hi:g}]")
    f_lo, f_hi = VALID_BAND
    if not f_lo <= config.frequency <= f_hi:
        warns.append(f"frequency {config.frequency:g} Hz outside the {f_lo:g}-{f_hi:g} Hz absorption window")
    return warns


def log_levels(lo: float = 1e-5, hi: float = 1e-1, per_decade: int = 4) -> np.ndarray:
    n = int(round(math.log10(hi / lo) * per_decade)) + 1
    return np.logspace(math.log10(hi), math.log10(lo), n)
