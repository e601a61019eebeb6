from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lora_ser.waveform import (
    LoRaParams,
    chirp_samples,
    dechirp,
    demod_dft,
    detect_coherent,
    detect_noncoherent,
    downchirp,
    modulate,
)

P7 = LoRaParams(7)


def chirp_reference(a, m):
    # direct transcription of the chirp phase, float arithmetic
    k = np.arange(m)
    return np.exp(2j * np.pi * k * (a / m - 0.5 + k / (2 * m)))


@pytest.mark.parametrize("sf", range(7, 13))
def test_params_m(sf):
    assert LoRaParams(sf).m == 2**sf


@pytest.mark.parametrize("sf", [6, 13, 0, -1])
def test_params_reject_sf(sf):
    with pytest.raises(ValueError):
        LoRaParams(sf)


def test_check_symbol_range():
    assert P7.check_symbol(127) == 127
    for bad in (-1, 128):
        with pytest.raises(ValueError):
            P7.check_symbol(bad)


def test_modulate_first_sample_and_unit_modulus():
    x = modulate(0, P7)
    assert x[0] == 1 + 0j
    np.testing.assert_allclose(np.abs(x), 1.0, atol=1e-15)


def test_modulate_mirror_property():
    # x_a[M-n] equals x_a[-n] (chirps are M-periodic in the sample index)
    m = P7.m
    for a in (0, 5, 80):
        x = modulate(a, P7)
        n = np.arange(1, m)
        np.testing.assert_allclose(x[m - n], chirp_samples(a, -n, m), atol=1e-12)


@pytest.mark.parametrize("a", [0, 1, 42, 80, 127])
def test_modulate_matches_float_formula(a):
    np.testing.assert_allclose(modulate(a, P7), chirp_reference(a, P7.m), atol=1e-11)


def test_dechirp_gives_tone():
    m = P7.m
    k = np.arange(m)
    for a in (0, 3, 80):
        np.testing.assert_allclose(dechirp(modulate(a, P7), P7), np.exp(2j * np.pi * k * a / m), atol=1e-12)
    np.testing.assert_allclose(dechirp(modulate(0, P7), P7), np.ones(m), atol=1e-12)
    assert np.all(dechirp(np.zeros(m, complex), P7) == 0)


def test_dechirp_length_mismatch():
    with pytest.raises(ValueError):
        dechirp(np.ones(10, complex), P7)


def test_downchirp_is_conjugate_base():
    np.testing.assert_allclose(downchirp(P7), np.conj(modulate(0, P7)))


def test_demod_dft_peak():
    m = P7.m
    for a in (0, 80, 127):
        spec = demod_dft(modulate(a, P7), P7)
        assert abs(spec[a] - m) < 1e-9 * m
        others = np.delete(spec, a)
        assert np.max(np.abs(others)) < 1e-9 * m
    assert abs(abs(demod_dft(modulate(80, P7), P7)[80]) - 128) < 1e-9


def test_demod_dft_linear_and_parseval():
    rng = np.random.default_rng(1)
    f = rng.normal(size=P7.m) + 1j * rng.normal(size=P7.m)
    g = rng.normal(size=P7.m) + 1j * rng.normal(size=P7.m)
    np.testing.assert_allclose(demod_dft(f + g, P7), demod_dft(f, P7) + demod_dft(g, P7), atol=1e-10)
    bins = demod_dft(f, P7)
    lhs = np.sum(np.abs(bins) ** 2)
    rhs = P7.m * np.sum(np.abs(dechirp(f, P7)) ** 2)
    assert abs(lhs - rhs) <= 1e-6 * rhs


def test_energy_concentration():
    spec = demod_dft(modulate(37, P7), P7)
    e = np.abs(spec) ** 2
    assert e[37] / e.sum() >= 0.99999


def test_loopback_all_symbols_both_detectors():
    a = np.arange(P7.m)
    frames = chirp_samples(a[:, None], np.arange(P7.m), P7.m)
    spec = demod_dft(frames, P7)
    np.testing.assert_array_equal(detect_noncoherent(spec), a)
    np.testing.assert_array_equal(detect_coherent(spec), a)


def test_detector_tie_break_and_types():
    flat = np.ones(P7.m, complex)
    assert detect_noncoherent(flat) == 0
    assert detect_coherent(flat) == 0
    assert isinstance(detect_noncoherent(flat), int)
    spec = np.zeros(P7.m, complex)
    spec[5] = P7.m
    spec[9] = 1j * P7.m
    assert detect_coherent(spec) == 5
    # same magnitude at 5 and 9: lowest index wins
    assert detect_noncoherent(spec) == 5


def test_detect_noncoherent_self_isi():
    from lora_ser.analytic_dft import dft_self_isi
    from lora_ser.channel import MultipathChannel

    ch = MultipathChannel.two_path(0.9 * np.exp(1j), 4)
    for a in (0, 2, 100):
        assert detect_noncoherent(dft_self_isi(a, ch, P7)) == a


@settings(max_examples=60, deadline=None)
@given(sf=st.integers(7, 10), a=st.integers(0, 2**10 - 1), shift=st.integers(-3, 3))
def test_chirp_periodic_and_exact(sf, a, shift):
    m = 2**sf
    a %= m
    k = np.arange(m)
    np.testing.assert_allclose(chirp_samples(a, k + shift * m, m), chirp_samples(a, k, m), atol=1e-12)
    np.testing.assert_allclose(np.abs(chirp_samples(a, k, m)), 1.0, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(a=st.integers(0, 127), b=st.integers(0, 127))
def test_symbol_shift_is_frequency_shift(a, b):
    # x_a * conj(x_b) is a pure tone at (a - b)
    m = P7.m
    k = np.arange(m)
    prod = modulate(a, P7) * np.conj(modulate(b, P7))
    np.testing.assert_allclose(prod, np.exp(2j * np.pi * k * (a - b) / m), atol=1e-11)
