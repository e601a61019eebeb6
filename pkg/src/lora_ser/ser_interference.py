"""Semi-analytic SER of a LoRa user hit by one aligned same-SF interferer.

The interferer behaves like a second path of gain ``sqrt(P_I) e^{j phi}`` at
delay ``tau``, except that it carries its own symbols ``(a2_prev, a2)``.
Depending on where its two peaks land relative to the desired bin ``a1``
there are five cases:

    A1  a2_prev != a2, neither peak on a1
    A2  a2_prev != a2, the (M - tau) peak of a2 on a1       (additive)
    A3  a2_prev != a2, the tau peak of a2_prev on a1        (additive)
    B1  a2_prev == a2, the single M peak off a1
    B2  a2_prev == a2, the single M peak on a1              (additive)

Only the additive cases depend on ``a1``, through ``alpha_tilde(a1 + tau)``.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .channel import InterfererConfig
from .analytic_dft import interferer_alpha_tilde
from .ser_mpc import _rule, gh_grid
from .special_fn import GaussHermiteRule, log_chi2_cdf_2dof, log_noncentral_chi2_cdf_2dof
from .waveform import LoRaParams


class InterfCase(enum.Enum):
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    B1 = "B1"
    B2 = "B2"

    @property
    def additive(self) -> bool:
        return self in (InterfCase.A2, InterfCase.A3, InterfCase.B2)


def interference_lambdas(cfg: InterfererConfig, sigma2: float, p: LoRaParams) -> tuple[float, float, float]:
    """Non-centralities of the (M - tau) peak, the tau peak and a full M peak."""
    m, tau = p.m, cfg.tau
    l1 = 2.0 * (m - tau) ** 2 * cfg.p_i / (m * sigma2)
    l2 = 2.0 * tau**2 * cfg.p_i / (m * sigma2)
    l3 = 2.0 * m * cfg.p_i / sigma2
    return l1, l2, l3


def _reinforcement(case: InterfCase, cfg: InterfererConfig, a1, p: LoRaParams):
    """Interferer contribution landing on the desired bin (complex, per a1)."""
    m, tau = p.m, cfg.tau
    at = interferer_alpha_tilde(cfg, np.mod(np.asarray(a1) + tau, m), p)
    scale = {InterfCase.A2: m - tau, InterfCase.A3: tau, InterfCase.B2: m}[case]
    return scale * np.asarray(at)


def decision_statistic(case: InterfCase, w, cfg: InterfererConfig, sigma2: float, p: LoRaParams, a1=None):
    """Normalised squared magnitude of the desired bin, ``2|peak + W|^2 / (M sigma2)``.

    ``w`` is the noise at the desired bin, variance M*sigma2.  For additive
    cases ``a1`` may be an array; the result then has shape ``a1.shape + w.shape``.
    """
    m = p.m
    w = np.asarray(w, dtype=complex)
    peak = complex(m)
    if case.additive:
        r = _reinforcement(case, cfg, a1, p)
        peak = m + r.reshape(np.shape(r) + (1,) * w.ndim)
    return 2.0 * np.abs(peak + w) ** 2 / (m * sigma2)


def log_pd_case(case: InterfCase, a1, w, cfg: InterfererConfig, sigma2: float, p: LoRaParams):
    case = InterfCase(case)
    if case.additive and a1 is None:
        raise ValueError(f"case {case.value} needs the desired symbol a1")
    if not case.additive and a1 is not None:
        raise ValueError(f"case {case.value} does not depend on a1")
    m = p.m
    l1, l2, l3 = interference_lambdas(cfg, sigma2, p)
    d = decision_statistic(case, w, cfg, sigma2, p, a1)
    central = log_chi2_cdf_2dof(d)
    if case is InterfCase.A1:
        return log_noncentral_chi2_cdf_2dof(d, l1) + log_noncentral_chi2_cdf_2dof(d, l2) + (m - 3) * central
    if case is InterfCase.A2:
        return log_noncentral_chi2_cdf_2dof(d, l2) + (m - 2) * central
    if case is InterfCase.A3:
        return log_noncentral_chi2_cdf_2dof(d, l1) + (m - 2) * central
    if case is InterfCase.B1:
        return log_noncentral_chi2_cdf_2dof(d, l3) + (m - 2) * central
    return (m - 1) * central


def pd_case(case: InterfCase, a1, w, cfg: InterfererConfig, sigma2: float, p: LoRaParams):
    """Probability of correct detection of ``a1`` in ``case`` given the noise ``w``."""
    return np.exp(log_pd_case(case, a1, w, cfg, sigma2, p))


def case_ser(case: InterfCase, cfg: InterfererConfig, sigma2: float, p: LoRaParams,
             rule: GaussHermiteRule | int | None = None, a1=None):
    """Gauss-Hermite average of ``1 - pd_case`` (one value per a1 for additive cases)."""
    nodes, weights = gh_grid(_rule(rule))
    w = math.sqrt(sigma2 * p.m) * nodes
    g = -np.expm1(log_pd_case(case, a1, w, cfg, sigma2, p))
    return g @ weights


def _check(cfg: InterfererConfig, sigma2: float, p: LoRaParams):
    cfg.check(p)
    if not sigma2 > 0:
        raise ValueError("sigma2 must be > 0")


def _combine(cfg, sigma2, p, rule, symbols, mult) -> float:
    m = p.m
    pe_b1 = float(case_ser(InterfCase.B1, cfg, sigma2, p, rule))
    if cfg.tau == 0:
        pe_b2 = float(case_ser(InterfCase.B2, cfg, sigma2, p, rule, a1=np.array([0]))[0])
        return ((m - 1) * pe_b1 + pe_b2) / m
    pe_a1 = float(case_ser(InterfCase.A1, cfg, sigma2, p, rule))
    s_a2 = mult * float(np.sum(case_ser(InterfCase.A2, cfg, sigma2, p, rule, a1=symbols)))
    s_a3 = mult * float(np.sum(case_ser(InterfCase.A3, cfg, sigma2, p, rule, a1=symbols)))
    s_b2 = mult * float(np.sum(case_ser(InterfCase.B2, cfg, sigma2, p, rule, a1=symbols)))
    pe_a = (m * (m - 1) * (m - 2) * pe_a1 + (m - 1) * (s_a2 + s_a3)) / m**3
    pe_b = (m * (m - 1) * pe_b1 + s_b2) / m**3
    return pe_a + pe_b


def ser_interference(cfg: InterfererConfig, sigma2: float, p: LoRaParams,
                     rule: GaussHermiteRule | int | None = None) -> float:
    """Non-coherent SER averaged over all (a1, a2_prev, a2); full sums over a1."""
    _check(cfg, sigma2, p)
    return _combine(cfg, sigma2, p, rule, np.arange(p.m), 1)


def two_adic_split(tau: int) -> tuple[int, int]:
    """Write tau = k * 2**n with k odd; returns (k, n)."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    n = (tau & -tau).bit_length() - 1
    return tau >> n, n


def distinct_count(tau: int, p: LoRaParams) -> int:
    """Number M1 = M / 2**n of distinct interferer rotations over a1."""
    return p.m >> two_adic_split(tau)[1]


def ser_interference_reduced(cfg: InterfererConfig, sigma2: float, p: LoRaParams,
                             rule: GaussHermiteRule | int | None = None) -> float:
    """Same value as :func:`ser_interference` for even tau, summing M1 symbols only."""
    _check(cfg, sigma2, p)
    if cfg.tau == 0 or cfg.tau % 2:
        raise ValueError("reduced evaluation needs tau = k * 2**n with k odd and n >= 1")
    _, n = two_adic_split(cfg.tau)
    m1 = p.m >> n
    return _combine(cfg, sigma2, p, rule, np.arange(m1), 1 << n)


def reduced_symbol_count(tau: int, p: LoRaParams) -> int:
    if tau == 0 or tau % 2:
        raise ValueError("tau must be even and non-zero")
    return distinct_count(tau, p)


def phi_extremes(tau: int, p: LoRaParams) -> tuple[float, float]:
    """(worst, best) interferer phase for delay tau."""
    if not 0 < tau < p.m:
        raise ValueError("tau must satisfy 0 < tau < M")
    if tau % 2:
        return math.pi / p.m, 0.0
    return 0.0, math.pi / distinct_count(tau, p)


def tau_step(p: LoRaParams) -> int:
    return 1 << (p.sf - 5)


def tau_sweep_grid(p: LoRaParams) -> list[int]:
    """0, step, 2*step, ..., M - step with step = 2**(SF-5)."""
    step = tau_step(p)
    return list(range(0, p.m, step))
