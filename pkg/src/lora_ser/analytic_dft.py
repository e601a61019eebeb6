"""Closed-form DFT outputs of the dechirped window (noiseless).

All bin indices are taken mod M.  The partial geometric sums are evaluated
by direct summation, which stays exact at the coherent index where the
closed form would be 0/0.
"""

from __future__ import annotations

import numpy as np

from .channel import InterfererConfig, MultipathChannel
from .waveform import LoRaParams, chirp_samples


def alpha_tilde(alpha: complex, k_i: int, a_bar, p: LoRaParams):
    """Echo gain seen in the dechirped domain: ``alpha * x_{a_bar}[M - k_i]``.

    ``a_bar`` may be an integer array; it is reduced mod M.
    """
    if not 0 < k_i < p.m:
        raise ValueError(f"echo delay must satisfy 0 < k_i < M, got {k_i}")
    a_bar = np.mod(np.asarray(a_bar), p.m)
    out = alpha * chirp_samples(a_bar, p.m - k_i, p.m)
    return complex(out) if np.ndim(out) == 0 else out


def alpha_tilde_factored(alpha: complex, k_i: int, a_bar, p: LoRaParams):
    """Same quantity as :func:`alpha_tilde` written as a phase ramp on ``x_0[M - k_i]``."""
    if not 0 < k_i < p.m:
        raise ValueError(f"echo delay must satisfy 0 < k_i < M, got {k_i}")
    a_bar = np.asarray(a_bar, dtype=float)
    out = alpha * np.exp(-2j * np.pi * k_i * a_bar / p.m) * chirp_samples(0, p.m - k_i, p.m)
    return complex(out) if np.ndim(out) == 0 else out


def m_term(alpha_t: complex, k_i: int, a_bar: int, n, m: int):
    """``alpha_t * sum_{k<k_i} exp(2j*pi*k*(a_bar - k_i - n)/M)`` for bins ``n``."""
    n = np.asarray(n)
    k = np.arange(k_i)
    q = np.mod(a_bar - k_i - n, m)
    s = np.exp(2j * np.pi * np.multiply.outer(q, k) / m).sum(axis=-1)
    return alpha_t * s


def dft_self_isi(a: int, ch: MultipathChannel, p: LoRaParams) -> np.ndarray:
    """Spectrum when the previous symbol equals the current one (circular convolution)."""
    a = p.check_symbol(a)
    ch.check(p)
    m = p.m
    spec = np.zeros(m, dtype=complex)
    spec[a] += m * ch.gains[0]
    for k_i, alpha in ch.echoes():
        spec[(a - k_i) % m] += m * alpha_tilde(alpha, k_i, a, p)
    return spec


def dft_isi(a: int, a_prev: int, ch: MultipathChannel, p: LoRaParams) -> np.ndarray:
    """Exact spectrum with the previous symbol's tail in the window."""
    a = p.check_symbol(a)
    a_prev = p.check_symbol(a_prev)
    ch.check(p)
    m = p.m
    n = np.arange(m)
    spec = np.zeros(m, dtype=complex)
    spec[a] += m * ch.gains[0]
    for k_i, alpha in ch.echoes():
        at_cur = alpha_tilde(alpha, k_i, a, p)
        at_prev = alpha_tilde(alpha, k_i, a_prev, p)
        echo_bin = (a - k_i) % m
        leak = m_term(at_prev, k_i, a_prev, n, m) - m_term(at_cur, k_i, a, n, m)
        leak[echo_bin] = (m - k_i) * at_cur + m_term(at_prev, k_i, a_prev, echo_bin, m)
        spec += leak
    return spec


def dft_isi_approx(a: int, ch: MultipathChannel, p: LoRaParams) -> np.ndarray:
    """Spectrum with the partial-sum leakage terms dropped."""
    a = p.check_symbol(a)
    ch.check(p)
    m = p.m
    spec = np.zeros(m, dtype=complex)
    spec[a] += m * ch.gains[0]
    for k_i, alpha in ch.echoes():
        spec[(a - k_i) % m] += (m - k_i) * alpha_tilde(alpha, k_i, a, p)
    return spec


def interferer_alpha_tilde(cfg: InterfererConfig, a_bar, p: LoRaParams):
    """Dechirped-domain gain of the interferer; for tau = 0 it is the raw gain."""
    if cfg.tau == 0:
        return cfg.alpha * np.ones(np.shape(a_bar)) if np.ndim(a_bar) else cfg.alpha
    return alpha_tilde(cfg.alpha, cfg.tau, a_bar, p)


def dft_interference(a1: int, a2_prev: int, a2: int, cfg: InterfererConfig, p: LoRaParams) -> np.ndarray:
    """Exact spectrum of desired symbol ``a1`` plus the delayed interferer."""
    a1, a2_prev, a2 = (p.check_symbol(s) for s in (a1, a2_prev, a2))
    cfg.check(p)
    m, tau = p.m, cfg.tau
    spec = np.zeros(m, dtype=complex)
    spec[a1] += m
    if tau == 0:
        spec[a2] += m * cfg.alpha
        return spec
    n = np.arange(m)
    at_cur = interferer_alpha_tilde(cfg, a2, p)
    at_prev = interferer_alpha_tilde(cfg, a2_prev, p)
    cur_bin = (a2 - tau) % m
    prev_bin = (a2_prev - tau) % m
    leak = m_term(at_prev, tau, a2_prev, n, m) - m_term(at_cur, tau, a2, n, m)
    leak[cur_bin] = 0
    leak[prev_bin] = 0
    spec += leak
    # When a2_prev == a2 both peak terms land on the same bin and add up to M*at_cur.
    spec[cur_bin] += (m - tau) * at_cur + m_term(at_prev, tau, a2_prev, cur_bin, m)
    spec[prev_bin] += tau * at_prev - m_term(at_cur, tau, a2, prev_bin, m)
    return spec
