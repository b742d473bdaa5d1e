"""Monte Carlo estimates of the average SER.

Two estimators are provided:

* ``symbol_level`` pushes random PSK symbols through ``y = h s + n`` with
  unit-variance complex noise and coherent minimum-distance detection.
* ``semi_analytic`` draws only the misalignment gain and averages the exact
  conditional SER, which is far cheaper at low error rates.

Trials are split into fixed-size chunks. Chunk ``k`` draws from its own
Philox stream keyed by ``(seed, k)``, and chunk results are reduced in chunk
order, so an estimate depends only on the seed and chunk size and never on
how many worker threads ran it.
"""

from __future__ import annotations

import enum
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .channel import DeterministicGains, MisalignmentModel, misalignment_gain, sample_pointing_error
from .ser import ModulationScheme, QMode, avg_ser_quadrature, instantaneous_ser

THREADS_ENV = "THZSIM_THREADS"
_SQRT_HALF = math.sqrt(0.5)


class McMode(str, enum.Enum):
    SYMBOL_LEVEL = "symbol_level"
    SEMI_ANALYTIC = "semi_analytic"


@dataclass(frozen=True)
class McConfig:
    mode: McMode = McMode.SEMI_ANALYTIC
    num_trials: int = 1_000_000
    seed: int = 0
    chunk_size: int = 1 << 18
    confidence_level: float = 0.95

    def __post_init__(self):
        object.__setattr__(self, "mode", McMode(self.mode))
        if self.num_trials < 1:
            raise ValueError("num_trials must be at least 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be at least 1")
        if not 0 < self.confidence_level < 1:
            raise ValueError("confidence_level must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a non-negative 64-bit integer")


@dataclass(frozen=True)
class McEstimate:
    ser: float
    half_width: float
    num_trials: int
    num_errors: int | None
    mode: McMode
    seed: int


def resolve_workers(requested: int | None = None) -> int:
    """Worker count, capped by the ``THZSIM_THREADS`` environment variable."""
    workers = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        workers = min(workers, int(cap))
    return max(1, workers)


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.Philox(ss))


def _channel_draws(rng, n, gains, model):
    r = sample_pointing_error(rng, model.sigma_r, n)
    return gains.product * misalignment_gain(r, model)


def _symbol_chunk(rng, n, scheme, avg_snr, gains, model) -> int:
    h = _channel_draws(rng, n, gains, model)
    amp = math.sqrt(avg_snr)
    noise_re = rng.standard_normal(n) * _SQRT_HALF
    noise_im = rng.standard_normal(n) * _SQRT_HALF
    if scheme is ModulationScheme.BPSK:
        bits = rng.integers(0, 2, n)
        s = (2.0 * bits - 1.0) * amp
        y_re = h * s + noise_re
        # the quadrature component carries no information for real BPSK
        return int(np.count_nonzero((y_re > 0) != (bits == 1)))
    bits_i = rng.integers(0, 2, n)
    bits_q = rng.integers(0, 2, n)
    scale = amp * _SQRT_HALF
    y_re = h * (2.0 * bits_i - 1.0) * scale + noise_re
    y_im = h * (2.0 * bits_q - 1.0) * scale + noise_im
    wrong = ((y_re > 0) != (bits_i == 1)) | ((y_im > 0) != (bits_q == 1))
    return int(np.count_nonzero(wrong))


def _semi_chunk(rng, n, scheme, avg_snr, gains, model):
    h = _channel_draws(rng, n, gains, model)
    ser = np.asarray(instantaneous_ser(scheme, avg_snr * h**2), dtype=float)
    # shifted accumulation keeps a constant sample exactly constant
    shift = ser[0]
    mean = shift + float(np.mean(ser - shift))
    m2 = float(np.sum((ser - mean) ** 2))
    return n, mean, m2


def _merge(a, b):
    n_a, mean_a, m2_a = a
    n_b, mean_b, m2_b = b
    n = n_a + n_b
    delta = mean_b - mean_a
    return n, mean_a + delta * (n_b / n), m2_a + m2_b + delta**2 * n_a * n_b / n


def _z(confidence_level: float) -> float:
    return float(stats.norm.ppf(0.5 + confidence_level / 2.0))


def binomial_half_width(errors: int, trials: int, confidence_level: float = 0.95) -> float:
    """Normal-approximation half width, Wilson interval below 30 errors.

    For Wilson the larger distance from the point estimate to either bound
    is returned, so ``p +- half_width`` covers the interval.
    """
    z = _z(confidence_level)
    p = errors / trials
    if errors >= 30:
        return z * math.sqrt(p * (1.0 - p) / trials)
    denom = 1.0 + z**2 / trials
    centre = (p + z**2 / (2.0 * trials)) / denom
    spread = z / denom * math.sqrt(p * (1.0 - p) / trials + z**2 / (4.0 * trials**2))
    return max(p - (centre - spread), (centre + spread) - p)


def _expected_ser(scheme, avg_snr, gains, model) -> float:
    try:
        return avg_ser_quadrature(scheme, avg_snr, gains, model, QMode.EXACT_Q)
    except (ArithmeticError, ValueError):
        return math.nan


def run_mc(
    config: McConfig,
    scheme,
    avg_snr: float,
    gains: DeterministicGains,
    model: MisalignmentModel,
    workers: int | None = None,
) -> McEstimate:
    """Estimate the average SER at linear average SNR ``avg_snr``."""
    scheme = ModulationScheme(scheme)
    if not avg_snr > 0:
        raise ValueError(f"avg_snr must be positive, got {avg_snr}")

    n_total = config.num_trials
    sizes = [config.chunk_size] * (n_total // config.chunk_size)
    if n_total % config.chunk_size:
        sizes.append(n_total % config.chunk_size)

    if config.mode is McMode.SYMBOL_LEVEL:
        expected = n_total * _expected_ser(scheme, avg_snr, gains, model)
        if expected < 10:
            warnings.warn(
                f"only {expected:.3g} symbol errors expected in {n_total} trials; estimate is unreliable",
                RuntimeWarning,
                stacklevel=2,
            )
        task = _symbol_chunk
    else:
        task = _semi_chunk

    def work(item):
        index, n = item
        return task(chunk_rng(config.seed, index), n, scheme, avg_snr, gains, model)

    items = list(enumerate(sizes))
    n_workers = min(resolve_workers(workers), len(items))
    if n_workers == 1:
        results = [work(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(work, items))

    if config.mode is McMode.SYMBOL_LEVEL:
        errors = sum(results)
        return McEstimate(
            ser=errors / n_total,
            half_width=binomial_half_width(errors, n_total, config.confidence_level),
            num_trials=n_total,
            num_errors=errors,
            mode=config.mode,
            seed=config.seed,
        )

    acc = results[0]
    for part in results[1:]:
        acc = _merge(acc, part)
    _, mean, m2 = acc
    if n_total > 1:
        half = _z(config.confidence_level) * math.sqrt(m2 / (n_total - 1) / n_total)
    else:
        half = 0.0
    return McEstimate(
        ser=min(max(mean, 0.0), 1.0),
        half_width=half,
        num_trials=n_total,
        num_errors=None,
        mode=config.mode,
        seed=config.seed,
    )
