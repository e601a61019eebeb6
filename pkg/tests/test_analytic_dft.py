from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lora_ser.analytic_dft import (
    alpha_tilde,
    alpha_tilde_factored,
    dft_interference,
    dft_isi,
    dft_isi_approx,
    dft_self_isi,
    m_term,
)
from lora_ser.channel import InterfererConfig, MultipathChannel, received_window_interference, received_window_mpc
from lora_ser.waveform import LoRaParams, chirp_samples, demod_dft

P7 = LoRaParams(7)
M = P7.m


def rel_err(x, y):
    return np.max(np.abs(x - y)) / np.max(np.abs(y))


def test_alpha_tilde_examples():
    assert math.isclose(abs(alpha_tilde(0.7, 6, 80, P7)), 0.7)
    alpha = 0.3 - 0.4j
    assert cmath.isclose(alpha_tilde(alpha, 6, 0, P7), alpha * chirp_samples(0, M - 6, M))
    with pytest.raises(ValueError):
        alpha_tilde(1.0, 0, 3, P7)
    with pytest.raises(ValueError):
        alpha_tilde(1.0, M, 3, P7)


def test_alpha_tilde_forms_agree():
    rng = np.random.default_rng(0)
    for _ in range(100):
        alpha = complex(rng.normal(), rng.normal())
        k = int(rng.integers(1, M))
        a = int(rng.integers(M))
        assert cmath.isclose(alpha_tilde(alpha, k, a, P7), alpha_tilde_factored(alpha, k, a, P7), abs_tol=1e-12)


def test_self_isi_examples():
    one = MultipathChannel((0,), (1.0,))
    spec = dft_self_isi(17, one, P7)
    assert spec[17] == M and np.count_nonzero(spec) == 1
    ch = MultipathChannel.two_path(0.7, 6)
    spec = dft_self_isi(80, ch, P7)
    assert math.isclose(abs(spec[74]), 89.6)
    sim = demod_dft(received_window_mpc(80, 80, ch, None, P7), P7)
    assert rel_err(spec, sim) < 1e-9


def test_isi_fig_setup():
    ch = MultipathChannel.two_path(0.7, 6)
    spec = dft_isi(80, 42, ch, P7)
    sim = demod_dft(received_window_mpc(42, 80, ch, None, P7), P7)
    assert rel_err(spec, sim) < 1e-9
    approx = dft_isi_approx(80, ch, P7)
    assert math.isclose(abs(approx[74]), (M - 6) * 0.7)
    assert math.isclose(abs(approx[74]), 85.4)


def test_leak_at_special_index():
    # the partial sum is coherent at n = a_prev - k: magnitude k * |alpha|
    at = alpha_tilde(0.7, 6, 42, P7)
    val = m_term(at, 6, 42, (42 - 6) % M, M)
    assert math.isclose(abs(val), 6 * 0.7, rel_tol=1e-12)


def test_isi_reduces_to_self_isi():
    rng = np.random.default_rng(2)
    ch = MultipathChannel((0, 3, 8), (1.0, 0.5j, -0.3))
    for a in rng.integers(0, M, 10):
        np.testing.assert_allclose(dft_isi(int(a), int(a), ch, P7), dft_self_isi(int(a), ch, P7), atol=1e-10)


def test_approx_one_path_is_self_isi():
    one = MultipathChannel((0,), (0.9,))
    np.testing.assert_array_equal(dft_isi_approx(5, one, P7), dft_self_isi(5, one, P7))


def _random_channel(rng):
    n = int(rng.integers(2, 5))
    delays = np.concatenate(([0], np.sort(rng.choice(np.arange(1, 20), n - 1, replace=False))))
    gains = np.concatenate(([1.0], 0.9 * rng.random(n - 1) * np.exp(2j * np.pi * rng.random(n - 1))))
    return MultipathChannel(tuple(int(d) for d in delays), tuple(gains))


def test_isi_exhaustive_subset_and_approx_bound():
    rng = np.random.default_rng(3)
    subset = rng.choice(M, 16, replace=False)
    for _ in range(5):
        ch = _random_channel(rng)
        bound = sum(2 * k * abs(g) for k, g in ch.echoes())
        for a in subset:
            for ap in subset:
                exact = dft_isi(int(a), int(ap), ch, P7)
                sim = demod_dft(received_window_mpc(int(ap), int(a), ch, None, P7), P7)
                assert rel_err(exact, sim) < 1e-9
                assert np.max(np.abs(dft_isi_approx(int(a), ch, P7) - exact)) <= bound + 1e-9


def test_interference_random_configs():
    rng = np.random.default_rng(4)
    for _ in range(100):
        a1, a2p, a2 = (int(x) for x in rng.integers(0, M, 3))
        cfg = InterfererConfig(int(rng.integers(0, M)), float(rng.uniform(0.01, 2)), float(rng.uniform(0, 2 * np.pi)))
        exact = dft_interference(a1, a2p, a2, cfg, P7)
        sim = demod_dft(received_window_interference(a1, a2p, a2, cfg, None, P7), P7)
        assert rel_err(exact, sim) < 1e-9


def test_interference_special_cases():
    cfg = InterfererConfig(9, 0.5, 1.1)
    spec = dft_interference(10, 30, 30, cfg, P7)
    assert np.count_nonzero(np.abs(spec) > 1e-9) == 2
    assert cmath.isclose(spec[21], M * alpha_tilde(cfg.alpha, 9, 30, P7), abs_tol=1e-9)
    cfg0 = InterfererConfig(0, 0.5, 1.1)
    spec = dft_interference(10, 99, 30, cfg0, P7)
    assert spec[10] == M and cmath.isclose(spec[30], M * cfg0.alpha)


@settings(max_examples=60, deadline=None)
@given(a=st.integers(0, 127), ap=st.integers(0, 127), k=st.integers(1, 127),
       mag=st.floats(0.01, 1.5), ph=st.floats(-math.pi, math.pi))
def test_interference_equals_isi_when_aligned(a, ap, k, mag, ph):
    alpha = mag * cmath.exp(1j * ph)
    ch = MultipathChannel.two_path(alpha, k)
    cfg = InterfererConfig(k, mag**2, ph)
    np.testing.assert_allclose(dft_interference(a, ap, a, cfg, P7), dft_isi(a, ap, ch, P7), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(alpha_re=st.floats(-2, 2), alpha_im=st.floats(-2, 2), k=st.integers(1, 127), a=st.integers(-300, 300))
def test_alpha_tilde_modulus_and_periodicity(alpha_re, alpha_im, k, a):
    alpha = complex(alpha_re, alpha_im)
    at = alpha_tilde(alpha, k, a, P7)
    assert math.isclose(abs(at), abs(alpha), rel_tol=1e-12, abs_tol=1e-15)
    assert cmath.isclose(at, alpha_tilde(alpha, k, a + M, P7), abs_tol=1e-12)
