import math
import warnings

import numpy as np
import pytest

from thzsim.channel import DeterministicGains, build_misalignment_model
from thzsim.montecarlo import (
    McConfig,
    McMode,
    binomial_half_width,
    chunk_rng,
    resolve_workers,
    run_mc,
)
from thzsim.ser import ModulationScheme, QMode, avg_ser_quadrature, instantaneous_ser

BPSK, QPSK = ModulationScheme.BPSK, ModulationScheme.QPSK
UNIT = DeterministicGains(h_p=1.0, h_a=1.0, product=1.0)
NO_JITTER = build_misalignment_model(0.1, 0.6, 0.0)


@pytest.mark.parametrize("scheme", [BPSK, QPSK])
def test_noiseless_proxy_has_no_errors(scheme, gains, model):
    with pytest.warns(RuntimeWarning):
        est = run_mc(McConfig(mode="symbol_level", num_trials=200_000, seed=3), scheme, 1e30, gains, model)
    assert est.num_errors == 0 and est.ser == 0.0


@pytest.mark.parametrize("scheme", [BPSK, QPSK])
def test_semi_analytic_without_jitter_is_exact(scheme, gains):
    est = run_mc(McConfig(num_trials=300_001, seed=1, chunk_size=65_536), scheme, 1e4, gains, NO_JITTER)
    assert est.ser == instantaneous_ser(scheme, 1e4 * (gains.product * NO_JITTER.a0) ** 2)
    assert est.half_width == 0.0
    assert est.num_errors is None


@pytest.mark.parametrize("mode", ["symbol_level", "semi_analytic"])
@pytest.mark.parametrize("scheme", [BPSK, QPSK])
def test_agrees_with_quadrature_at_reference(mode, scheme, gains, model):
    est = run_mc(McConfig(mode=mode, num_trials=10**7, seed=11), scheme, 1e4, gains, model)
    truth = avg_ser_quadrature(scheme, 1e4, gains, model, QMode.EXACT_Q)
    assert abs(est.ser - truth) <= 3 * est.half_width


@pytest.mark.parametrize("scheme", [BPSK, QPSK])
def test_modes_agree(scheme, link):
    from dataclasses import replace

    from thzsim.channel import deterministic_gains, misalignment_model

    for d, j, snr_db in [(30, 0.01, 38), (80, 0.05, 50), (50, 0.025, 44)]:
        cfg = replace(link, distance=d, jitter_value=j)
        g, m = deterministic_gains(cfg), misalignment_model(cfg)
        rho = 10 ** (snr_db / 10)
        n = max(10**6, math.ceil(200 / avg_ser_quadrature(scheme, rho, g, m)))
        sym = run_mc(McConfig(mode="symbol_level", num_trials=n, seed=5), scheme, rho, g, m)
        semi = run_mc(McConfig(mode="semi_analytic", num_trials=10**6, seed=6), scheme, rho, g, m)
        assert sym.num_errors >= 100
        z = 1.959963984540054
        sig_sym, sig_semi = sym.half_width / z, semi.half_width / z
        assert abs(sym.ser - semi.ser) <= 3 * (sig_sym + sig_semi)


@pytest.mark.parametrize("snr_db", [0.0, 4.0, 7.0])
def test_awgn_bpsk_sanity(snr_db):
    snr = 10 ** (snr_db / 10)
    avg = snr / NO_JITTER.a0**2
    est = run_mc(McConfig(mode="symbol_level", num_trials=2_000_000, seed=8), BPSK, avg, UNIT, NO_JITTER)
    p = instantaneous_ser(BPSK, snr)
    assert abs(est.ser - p) <= 3 * math.sqrt(p * (1 - p) / est.num_trials)


def test_determinism_across_workers_and_runs(gains, model):
    for mode in ("symbol_level", "semi_analytic"):
        cfg = McConfig(mode=mode, num_trials=1_000_003, seed=2**63 + 17, chunk_size=100_000)
        runs = [run_mc(cfg, QPSK, 10**4.2, gains, model, workers=w) for w in (1, 2, 8, 8)]
        assert len({repr(r) for r in runs}) == 1


def test_seed_changes_estimate(gains, model):
    a = run_mc(McConfig(num_trials=50_000, seed=1), BPSK, 1e4, gains, model)
    b = run_mc(McConfig(num_trials=50_000, seed=2), BPSK, 1e4, gains, model)
    assert a.ser != b.ser


def test_chunk_streams_are_independent():
    a = chunk_rng(7, 0).random(5)
    b = chunk_rng(7, 1).random(5)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, chunk_rng(7, 0).random(5))


def test_semi_analytic_error_shrinks_as_inverse_sqrt(gains, model):
    truth = avg_ser_quadrature(BPSK, 1e4, gains, model)
    sizes = [10**2, 10**3, 10**4, 10**5, 10**6]
    rms = []
    for n in sizes:
        errs = [run_mc(McConfig(num_trials=n, seed=s), BPSK, 1e4, gains, model).ser - truth for s in range(24)]
        rms.append(math.sqrt(np.mean(np.square(errs))))
    slope = np.polyfit(np.log10(sizes), np.log10(rms), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.12)


def test_binomial_half_width():
    z = 1.959963984540054
    assert binomial_half_width(500, 10_000) == pytest.approx(z * math.sqrt(0.05 * 0.95 / 10_000), rel=1e-9)
    # Wilson fallback with no errors still gives a positive width
    hw = binomial_half_width(0, 1000)
    assert hw == pytest.approx(z**2 / (1000 + z**2), rel=1e-9)
    assert binomial_half_width(10, 1000) > 0


def test_warns_when_too_few_errors_expected(gains, model):
    with pytest.warns(RuntimeWarning, match="errors expected"):
        run_mc(McConfig(mode="symbol_level", num_trials=1000, seed=0), BPSK, 1e6, gains, model)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        run_mc(McConfig(mode="symbol_level", num_trials=100_000, seed=0), BPSK, 1e4, gains, model)


@pytest.mark.parametrize("kwargs", [{"num_trials": 0}, {"chunk_size": 0}, {"confidence_level": 1.0},
                                    {"seed": -1}, {"seed": 2**64}, {"mode": "nope"}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        McConfig(**kwargs)


def test_rejects_bad_snr(gains, model):
    with pytest.raises(ValueError):
        run_mc(McConfig(), BPSK, 0.0, gains, model)


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("THZSIM_THREADS", "3")
    assert resolve_workers(8) == 3
    assert resolve_workers(2) == 2
    monkeypatch.delenv("THZSIM_THREADS")
    assert resolve_workers(5) == 5


def test_estimate_echoes_config(gains, model):
    est = run_mc(McConfig(mode=McMode.SYMBOL_LEVEL, num_trials=1234, seed=42), BPSK, 1e3, gains, model)
    assert (est.mode, est.seed, est.num_trials) == (McMode.SYMBOL_LEVEL, 42, 1234)
    assert 0 <= est.num_errors <= est.num_trials
