"""Semi-analytic symbol error rate over a discrete multipath channel.

The error probability is conditioned on the noise sample ``w`` at the
correct bin (a complex Gaussian of variance M*sigma2), written as a product
of per-bin CDFs, and then averaged over ``w`` with a 2-D Gauss-Hermite rule.
Two cases matter: the previous symbol equals the current one (self-ISI, echo
peak ``M*alpha_tilde``) or differs (ISI, echo peak ``(M-k_i)*alpha_tilde``).
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache
from typing import Callable

import numpy as np

from .analytic_dft import alpha_tilde
from .channel import MultipathChannel, exp_decay_channel
from .special_fn import (
    GaussHermiteRule,
    gauss_hermite,
    log_chi2_cdf_2dof,
    log_noncentral_chi2_cdf_2dof,
    log_normal_cdf,
    log_rician_cdf,
)
from .waveform import LoRaParams

DEFAULT_GH_POINTS = 15


class CaseTag(enum.IntEnum):
    SELF_ISI = 1
    ISI = 2


@lru_cache(maxsize=None)
def default_rule(n: int = DEFAULT_GH_POINTS) -> GaussHermiteRule:
    return gauss_hermite(n)


def _rule(rule: GaussHermiteRule | int | None) -> GaussHermiteRule:
    if rule is None:
        return default_rule()
    if isinstance(rule, GaussHermiteRule):
        return rule
    return default_rule(int(rule))


def gh_grid(rule: GaussHermiteRule):
    """Flattened Cartesian product: complex nodes and weights ``p_n p_m / pi``."""
    nodes = (rule.nodes[:, None] + 1j * rule.nodes[None, :]).ravel()
    weights = (rule.weights[:, None] * rule.weights[None, :]).ravel() / math.pi
    return nodes, weights


def gh_expectation(g: Callable, sigma2: float, rule: GaussHermiteRule | int | None, p: LoRaParams) -> float:
    """E[g(W)] for W ~ CN(0, M*sigma2), i.e. (1/pi) sum g(sigma*sqrt(M)*(w_n + j w_m)) p_n p_m.

    ``g`` is called once with the whole array of quadrature points.
    """
    nodes, weights = gh_grid(_rule(rule))
    vals = np.asarray(g(math.sqrt(sigma2 * p.m) * nodes), dtype=float)
    return float(np.sum(vals * weights, axis=-1))


def noncentrality(ch: MultipathChannel, sigma2: float, c: CaseTag, p: LoRaParams) -> np.ndarray:
    """Chi-square non-centrality of each echo bin (normalised by M*sigma2/2)."""
    m = p.m
    k = np.array(ch.delays[1:], dtype=float)
    g2 = np.abs(np.array(ch.gains[1:])) ** 2
    if c == CaseTag.SELF_ISI:
        return 2.0 * m * g2 / sigma2
    return 2.0 * (m - k) ** 2 * g2 / (m * sigma2)


def rice_noncentrality(ch: MultipathChannel, c: CaseTag, p: LoRaParams) -> np.ndarray:
    m = p.m
    k = np.array(ch.delays[1:], dtype=float)
    mag = np.abs(np.array(ch.gains[1:]))
    return (m if c == CaseTag.SELF_ISI else m - k) * mag


def echo_amplitudes(ch: MultipathChannel, a, c: CaseTag, p: LoRaParams) -> np.ndarray:
    """Echo peaks d_i for symbol(s) ``a``: shape ``np.shape(a) + (K-1,)``."""
    a = np.asarray(a)
    out = []
    for k_i, alpha in ch.echoes():
        scale = p.m if c == CaseTag.SELF_ISI else p.m - k_i
        out.append(scale * alpha_tilde(alpha, k_i, a, p))
    if not out:
        return np.zeros(a.shape + (0,), dtype=complex)
    return np.stack(np.broadcast_arrays(*out), axis=-1)


def _correct_peak(w, ch: MultipathChannel, p: LoRaParams):
    return p.m * ch.gains[0] + np.asarray(w, dtype=complex)


def log_pd_given_w_noncoherent(w, ch, sigma2, c, p, form="chi2"):
    m, n_paths = p.m, ch.n_paths
    z = _correct_peak(w, ch, p)
    if form == "chi2":
        x = np.abs(z) ** 2 / (m * sigma2 / 2.0)
        out = (m - n_paths) * log_chi2_cdf_2dof(x)
        for lam in noncentrality(ch, sigma2, c, p):
            out = out + log_noncentral_chi2_cdf_2dof(x, lam)
    elif form == "rice":
        scale = math.sqrt(sigma2 / 2.0) * math.sqrt(m)
        r = np.abs(z)
        out = (m - n_paths) * log_rician_cdf(r, 0.0, scale)
        for v in rice_noncentrality(ch, c, p):
            out = out + log_rician_cdf(r, v, scale)
    else:
        raise ValueError(f"unknown form {form!r}")
    return out


def pd_given_w_noncoherent(w, ch: MultipathChannel, sigma2: float, c: CaseTag, p: LoRaParams, form: str = "chi2"):
    """Probability of correct non-coherent detection given the noise at the correct bin.

    ``form="chi2"`` uses squared magnitudes, ``form="rice"`` magnitudes; the
    two are the same quantity.  Independent of the symbol values.
    """
    return np.exp(log_pd_given_w_noncoherent(w, ch, sigma2, CaseTag(c), p, form))


def log_pd_given_w_coherent(w, a, ch, sigma2, c, p):
    m, n_paths = p.m, ch.n_paths
    sd = math.sqrt(sigma2 / 2.0) * math.sqrt(m)
    re_z = np.real(_correct_peak(w, ch, p))
    re_d = np.real(echo_amplitudes(ch, a, c, p))  # (..., K-1)
    re_z_b = re_z[..., None] if re_d.shape[-1] else re_z
    out = (m - n_paths) * log_normal_cdf(re_z, 0.0, sd)
    if re_d.shape[-1]:
        # broadcast a-shape against w-shape: a on the leading axes
        a_shape = np.shape(a)
        re_d = re_d.reshape(a_shape + (1,) * np.ndim(re_z) + (re_d.shape[-1],))
        out = out + log_normal_cdf(re_z_b, re_d, sd).sum(axis=-1)
    return np.broadcast_to(out, np.shape(a) + np.shape(re_z))


def pd_given_w_coherent(w, a, ch: MultipathChannel, sigma2: float, c: CaseTag, p: LoRaParams):
    """Probability of correct coherent detection given the noise at the correct bin.

    Depends on ``a`` through the real part of the rotated echo peaks.  When
    ``a`` is an array the result has shape ``np.shape(a) + np.shape(w)``.
    """
    return np.exp(log_pd_given_w_coherent(w, a, ch, sigma2, CaseTag(c), p))


def _check_sigma2(sigma2):
    if not sigma2 > 0:
        raise ValueError("sigma2 must be > 0")


def conditional_ser_noncoherent(ch, sigma2, c, p, rule=None) -> float:
    _check_sigma2(sigma2)
    return gh_expectation(lambda w: -np.expm1(log_pd_given_w_noncoherent(w, ch, sigma2, c, p)), sigma2, rule, p)


def ser_mpc_noncoherent(ch: MultipathChannel, sigma2: float, p: LoRaParams,
                        rule: GaussHermiteRule | int | None = None) -> float:
    ch.check(p)
    m = p.m
    if ch.n_paths == 1:
        return conditional_ser_noncoherent(ch, sigma2, CaseTag.SELF_ISI, p, rule)
    pe1 = conditional_ser_noncoherent(ch, sigma2, CaseTag.SELF_ISI, p, rule)
    pe2 = conditional_ser_noncoherent(ch, sigma2, CaseTag.ISI, p, rule)
    return pe1 / m + (m - 1) / m * pe2


def conditional_ser_coherent(ch, sigma2, c, p, rule=None, symbols=None) -> np.ndarray:
    """Per-symbol coherent error probability, one entry per symbol in ``symbols``."""
    _check_sigma2(sigma2)
    symbols = np.arange(p.m) if symbols is None else np.asarray(symbols)
    nodes, weights = gh_grid(_rule(rule))
    w = math.sqrt(sigma2 * p.m) * nodes
    g = -np.expm1(log_pd_given_w_coherent(w, symbols, ch, sigma2, c, p))
    return g @ weights


def ser_mpc_coherent(ch: MultipathChannel, sigma2: float, p: LoRaParams,
                     rule: GaussHermiteRule | int | None = None) -> float:
    ch.check(p)
    m = p.m
    if ch.n_paths == 1:
        return float(conditional_ser_coherent(ch, sigma2, CaseTag.SELF_ISI, p, rule, symbols=[0])[0])
    pe1 = conditional_ser_coherent(ch, sigma2, CaseTag.SELF_ISI, p, rule)
    pe2 = conditional_ser_coherent(ch, sigma2, CaseTag.ISI, p, rule)
    return float(np.sum(pe1 + (m - 1) * pe2) / m**2)


def ser_mpc(ch, sigma2, p, detector="noncoherent", rule=None) -> float:
    if detector == "noncoherent":
        return ser_mpc_noncoherent(ch, sigma2, p, rule)
    if detector == "coherent":
        return ser_mpc_coherent(ch, sigma2, p, rule)
    raise ValueError(f"unknown detector {detector!r}")


def g_two_path(c: CaseTag, alpha1: complex, k1: int, sigma2: float, p: LoRaParams) -> Callable:
    """Conditional error ``1 - P(correct | W)`` for the channel 1 + alpha1 z^-k1."""
    return g_channel(c, MultipathChannel.two_path(alpha1, k1), sigma2, p)


def g_exp_decay(c: CaseTag, rho: float, sigma2: float, p: LoRaParams) -> Callable:
    return g_channel(c, exp_decay_channel(rho, p), sigma2, p)


def g_channel(c: CaseTag, ch: MultipathChannel, sigma2: float, p: LoRaParams) -> Callable:
    c = CaseTag(c)

    def g(w):
        return -np.expm1(log_pd_given_w_noncoherent(w, ch, sigma2, c, p))

    return g


def snr_db_to_sigma2(snr_db):
    return 10.0 ** (-np.asarray(snr_db, dtype=float) / 10.0)


def snr_at_ser(snr_db, ser, target: float) -> float:
    """First crossing of ``target`` on a decreasing SER curve, log-linear in SER.

    Returns NaN if the curve never crosses.
    """
    snr_db = np.asarray(snr_db, dtype=float)
    log_ser = np.log(np.maximum(np.asarray(ser, dtype=float), 1e-300))
    lt = math.log(target)
    below = np.nonzero(log_ser <= lt)[0]
    if below.size == 0 or below[0] == 0:
        return float("nan")
    i = below[0]
    s0, s1 = snr_db[i - 1], snr_db[i]
    l0, l1 = log_ser[i - 1], log_ser[i]
    return float(s0 + (s1 - s0) * (lt - l0) / (l1 - l0))


def find_snr_at_ser(ser_fn: Callable[[float], float], target: float, step_db: float = 0.1,
                    lo_db: float = -40.0, hi_db: float = 40.0, coarse_db: float = 2.0) -> float:
    """SNR (dB) where ``ser_fn`` crosses ``target``.

    A coarse scan brackets the crossing, then the bracket is re-evaluated on a
    ``step_db`` grid aligned to multiples of ``step_db`` and interpolated
    log-linearly between the two grid points around the crossing.
    """
    prev = lo_db
    if ser_fn(10.0 ** (-lo_db / 10.0)) <= target:
        return float("nan")
    s = lo_db + coarse_db
    while s <= hi_db:
        if ser_fn(10.0 ** (-s / 10.0)) <= target:
            break
        prev = s
        s += coarse_db
    else:
        return float("nan")
    start = math.floor(prev / step_db) * step_db
    grid = np.arange(round(start / step_db), round(s / step_db) + 1) * step_db
    sers = [ser_fn(10.0 ** (-g / 10.0)) for g in grid]
    return snr_at_ser(grid, sers, target)
