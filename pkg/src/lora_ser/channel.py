"""Discrete multipath channels, aligned same-SF interferer, complex AWGN.

The receiver is synchronised on the first path.  A detection window of M
samples sees the current symbol on every path, plus the tail of the previous
symbol on the first ``k_i`` samples of each delayed path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .waveform import LoRaParams, chirp_samples


@dataclass(frozen=True)
class MultipathChannel:
    delays: tuple[int, ...]
    gains: tuple[complex, ...]

    def __post_init__(self):
        delays = tuple(int(d) for d in self.delays)
        if any(d != d0 for d, d0 in zip(delays, self.delays)):
            raise ValueError("tap delays must be integers")
        gains = tuple(complex(g) for g in self.gains)
        if not delays:
            raise ValueError("channel needs at least one tap")
        if len(delays) != len(gains):
            raise ValueError("delays and gains differ in length")
        if delays[0] != 0:
            raise ValueError("first tap delay must be 0 (receiver synchronised on first path)")
        if any(b <= a for a, b in zip(delays, delays[1:])):
            raise ValueError("tap delays must be strictly increasing")
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "gains", gains)

    @classmethod
    def from_taps(cls, taps) -> MultipathChannel:
        taps = list(taps)
        return cls(tuple(d for d, _ in taps), tuple(g for _, g in taps))

    @classmethod
    def two_path(cls, alpha1: complex, k1: int, alpha0: complex = 1.0) -> MultipathChannel:
        return cls((0, k1), (alpha0, alpha1))

    @property
    def taps(self) -> list[tuple[int, complex]]:
        return list(zip(self.delays, self.gains))

    @property
    def n_paths(self) -> int:
        return len(self.delays)

    def echoes(self) -> list[tuple[int, complex]]:
        return self.taps[1:]

    def check(self, p: LoRaParams) -> None:
        if self.delays[-1] >= p.m:
            raise ValueError(f"tap delay {self.delays[-1]} must be < M = {p.m}")


@dataclass(frozen=True)
class NoiseConfig:
    """Complex AWGN of total variance ``sigma2`` (SNR = 1/sigma2)."""

    sigma2: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be > 0")

    @classmethod
    def from_snr_db(cls, snr_db: float, seed: int = 0) -> NoiseConfig:
        return cls(10.0 ** (-snr_db / 10.0), seed)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class InterfererConfig:
    tau: int
    p_i: float
    phi: float = 0.0

    def __post_init__(self):
        if int(self.tau) != self.tau or self.tau < 0:
            raise ValueError("tau must be a non-negative integer")
        if not self.p_i > 0:
            raise ValueError("interferer power must be > 0")
        object.__setattr__(self, "tau", int(self.tau))

    @classmethod
    def from_sir_db(cls, tau: int, sir_db: float, phi: float = 0.0) -> InterfererConfig:
        return cls(tau, 10.0 ** (-sir_db / 10.0), phi)

    @property
    def alpha(self) -> complex:
        return math.sqrt(self.p_i) * cmath.exp(1j * self.phi)

    def check(self, p: LoRaParams) -> None:
        if self.tau >= p.m:
            raise ValueError(f"tau {self.tau} must be < M = {p.m}")


def exp_decay_channel(rho: float, p: LoRaParams | None = None) -> MultipathChannel:
    """Taps ``rho**i`` at delay i, for i < K with K the least integer such that rho**K <= 0.2."""
    if not 0 < rho < 1:
        raise ValueError("rho must be in (0, 1)")
    k = 1
    while abs(rho) ** k > 0.2 * (1 + 1e-12):
        k += 1
    ch = MultipathChannel(tuple(range(k)), tuple(rho**i for i in range(k)))
    if p is not None:
        ch.check(p)
    return ch


def read_channel_file(path) -> MultipathChannel:
    """Parse ``delay gain_re gain_im`` lines; ``#`` starts a comment."""
    taps = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'delay gain_re gain_im'")
        try:
            delay = int(fields[0])
            gain = complex(float(fields[1]), float(fields[2]))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
        taps.append((delay, gain))
    return MultipathChannel.from_taps(taps)


def write_channel_file(path, ch: MultipathChannel) -> None:
    lines = [f"{d} {g.real!r} {g.imag!r}" for d, g in ch.taps]
    Path(path).write_text("\n".join(lines) + "\n")


def _delayed_symbol(a_prev, a_cur, delay: int, m: int) -> np.ndarray:
    """Path delayed by ``delay``: x_{a_prev} tail for k < delay, x_{a_cur} after.

    ``a_prev``/``a_cur`` may be arrays of shape (B,) giving a (B, M) batch.
    """
    k = np.arange(m)
    a_prev = np.asarray(a_prev)[..., None]
    a_cur = np.asarray(a_cur)[..., None]
    sym = np.where(k < delay, a_prev, a_cur)
    return chirp_samples(sym, k - delay, m)


def add_awgn(frame, noise: NoiseConfig | float, rng: np.random.Generator | None = None) -> np.ndarray:
    """Add circular complex Gaussian noise, variance sigma2/2 per component.

    With no explicit ``rng`` the noise stream is drawn from ``noise.seed``.
    """
    frame = np.asarray(frame, dtype=complex)
    if isinstance(noise, NoiseConfig):
        sigma2 = noise.sigma2
        if rng is None:
            rng = noise.rng()
    else:
        sigma2 = float(noise)
        if rng is None:
            raise ValueError("an rng is required when noise is given as a variance")
    scale = math.sqrt(sigma2 / 2.0)
    w = rng.standard_normal(frame.shape + (2,))
    return frame + scale * (w[..., 0] + 1j * w[..., 1])


def received_window_mpc(a_prev, a_cur, ch: MultipathChannel, noise: NoiseConfig | None,
                        p: LoRaParams, rng: np.random.Generator | None = None) -> np.ndarray:
    """Detection window of ``a_cur`` after the multipath channel.

    Scalars give one (M,) window; equal-length symbol arrays give a batch.
    """
    ch.check(p)
    if np.ndim(a_prev) == 0:
        p.check_symbol(a_prev)
        p.check_symbol(a_cur)
    out = 0j
    for delay, gain in ch.taps:
        out = out + gain * _delayed_symbol(a_prev, a_cur, delay, p.m)
    out = np.asarray(out, dtype=complex)
    if noise is not None:
        out = add_awgn(out, noise, rng)
    return out


def received_window_interference(a1, a2_prev, a2, cfg: InterfererConfig, noise: NoiseConfig | None,
                                 p: LoRaParams, rng: np.random.Generator | None = None) -> np.ndarray:
    """Desired symbol ``a1`` plus an aligned interferer delayed by ``cfg.tau``."""
    cfg.check(p)
    if np.ndim(a1) == 0:
        for a in (a1, a2_prev, a2):
            p.check_symbol(a)
    k = np.arange(p.m)
    desired = chirp_samples(np.asarray(a1)[..., None], k, p.m)
    out = desired + cfg.alpha * _delayed_symbol(a2_prev, a2, cfg.tau, p.m)
    if noise is not None:
        out = add_awgn(out, noise, rng)
    return out
