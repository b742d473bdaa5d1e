"""Shared constructors for tests."""

import math

from thzsim.channel import DeterministicGains, build_misalignment_model
from thzsim.ser import ser_params


def link_for_params(a_param, b_param, a=0.1, w_d=0.6, product=0.4956706018689571):
    """Genuine (avg_snr, gains, model) triple whose (A, B) equal the targets."""
    base = build_misalignment_model(a, w_d, 0.01)
    gamma = math.sqrt(2.0 * b_param)
    sigma = base.w_eq / (2.0 * gamma)
    model = build_misalignment_model(a, w_d, sigma, "std_dev")
    gains = DeterministicGains(h_p=product, h_a=1.0, product=product)
    avg_snr = a_param / (model.a0 * product) ** 2
    return avg_snr, gains, model


def check_params(a_param, b_param, triple):
    p = ser_params(*triple)
    assert math.isclose(p.a_param, a_param, rel_tol=1e-12)
    assert math.isclose(p.b_param, b_param, rel_tol=1e-12)
