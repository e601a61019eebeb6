"""Seeded Monte Carlo SER estimation.

Each (grid point, batch) pair gets its own generator derived from
``SeedSequence(seed, spawn_key=(point, batch))``, so results do not depend on
batch scheduling or on how many worker threads are used.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .channel import (
    InterfererConfig,
    MultipathChannel,
    add_awgn,
    received_window_interference,
    received_window_mpc,
)
from .waveform import LoRaParams, chirp_samples, demod_dft, detect_coherent, detect_noncoherent

DETECTORS = ("noncoherent", "coherent")


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo settings.

    ``trials`` is the trial count per SNR point, or the cap when
    ``target_errors`` is set (stop after that many errors).  ``warmup`` only
    matters for the stream simulator: with it, the first symbol has a random
    predecessor; without, it is preceded by silence.
    """

    trials: int = 100_000
    seed: int = 0
    detector: str = "noncoherent"
    warmup: bool = True
    batch_size: int = 10_000
    target_errors: int | None = None
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.detector not in DETECTORS:
            raise ValueError(f"detector must be one of {DETECTORS}")
        if self.target_errors is not None and self.target_errors < 1:
            raise ValueError("target_errors must be >= 1")


@dataclass(frozen=True)
class SerPoint:
    snr_db: float
    ser: float
    errors: int
    trials: int
    ci95_halfwidth: float
    source: str = "sim"

    @classmethod
    def from_counts(cls, snr_db: float, errors: int, trials: int) -> SerPoint:
        p = errors / trials
        return cls(float(snr_db), p, int(errors), int(trials), binomial_ci95(p, trials))

    @classmethod
    def theory(cls, snr_db: float, ser: float) -> SerPoint:
        return cls(float(snr_db), float(ser), 0, 0, 0.0, source="theory")


def binomial_ci95(p: float, n: int) -> float:
    return 1.959963984540054 * math.sqrt(p * (1.0 - p) / n)


def batch_rng(seed: int, point: int, batch: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(point, batch)))


def _detect(spec, detector: str):
    return detect_noncoherent(spec) if detector == "noncoherent" else detect_coherent(spec)


def _run_point(kernel: Callable[[np.random.Generator, int], int], point: int, cfg: SimConfig) -> tuple[int, int]:
    """Run batches of ``kernel(rng, n) -> errors`` until the trial cap or error target."""
    n_batches = -(-cfg.trials // cfg.batch_size)
    sizes = [min(cfg.batch_size, cfg.trials - b * cfg.batch_size) for b in range(n_batches)]

    def run(b):
        return kernel(batch_rng(cfg.seed, point, b), sizes[b])

    if cfg.target_errors is None and cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            errs = list(pool.map(run, range(n_batches)))
        return sum(errs), cfg.trials
    errors = trials = 0
    for b in range(n_batches):
        errors += run(b)
        trials += sizes[b]
        if cfg.target_errors is not None and errors >= cfg.target_errors:
            break
    return errors, trials


def _sweep(kernel_for: Callable[[float], Callable], snr_grid: Sequence[float], cfg: SimConfig) -> list[SerPoint]:
    out = []
    for i, snr_db in enumerate(snr_grid):
        errors, trials = _run_point(kernel_for(float(snr_db)), i, cfg)
        out.append(SerPoint.from_counts(snr_db, errors, trials))
    return out


def _sigma2(snr_db: float) -> float:
    return 10.0 ** (-snr_db / 10.0)


def mpc_errors(rng, n, ch: MultipathChannel, sigma2: float, p: LoRaParams, detector: str) -> int:
    a_prev = rng.integers(0, p.m, n)
    a = rng.integers(0, p.m, n)
    r = received_window_mpc(a_prev, a, ch, None, p)
    r = add_awgn(r, sigma2, rng)
    return int(np.count_nonzero(_detect(demod_dft(r, p), detector) != a))


def simulate_mpc(ch: MultipathChannel, snr_grid: Sequence[float], cfg: SimConfig, p: LoRaParams) -> list[SerPoint]:
    """Window-level simulation with independent uniform (previous, current) symbols."""
    ch.check(p)

    def kernel_for(snr_db):
        s2 = _sigma2(snr_db)
        return lambda rng, n: mpc_errors(rng, n, ch, s2, p, cfg.detector)

    return _sweep(kernel_for, snr_grid, cfg)


def interference_errors(rng, n, icfg: InterfererConfig, sigma2: float, p: LoRaParams, detector: str) -> int:
    a1 = rng.integers(0, p.m, n)
    a2_prev = rng.integers(0, p.m, n)
    a2 = rng.integers(0, p.m, n)
    r = received_window_interference(a1, a2_prev, a2, icfg, None, p)
    r = add_awgn(r, sigma2, rng)
    return int(np.count_nonzero(_detect(demod_dft(r, p), detector) != a1))


def simulate_interference(icfg: InterfererConfig, snr_grid: Sequence[float], cfg: SimConfig,
                          p: LoRaParams) -> list[SerPoint]:
    """Desired user plus one aligned interferer at a fixed phase; symbols uniform."""
    icfg.check(p)

    def kernel_for(snr_db):
        s2 = _sigma2(snr_db)
        return lambda rng, n: interference_errors(rng, n, icfg, s2, p, cfg.detector)

    return _sweep(kernel_for, snr_grid, cfg)


def awgn_errors(rng, n, sigma2: float, p: LoRaParams, detector: str) -> int:
    a = rng.integers(0, p.m, n)
    r = add_awgn(chirp_samples(a[:, None], np.arange(p.m), p.m), sigma2, rng)
    return int(np.count_nonzero(_detect(demod_dft(r, p), detector) != a))


def stream_signal(symbols: np.ndarray, ch: MultipathChannel, p: LoRaParams) -> np.ndarray:
    """Concatenated chirps linearly convolved with the tap-delay line, cut to the stream length."""
    s = chirp_samples(np.asarray(symbols)[:, None], np.arange(p.m), p.m).ravel()
    out = np.zeros_like(s)
    for delay, gain in ch.taps:
        out[delay:] += gain * s[: s.size - delay]
    return out


def simulate_stream_mpc(symbol_count: int, ch: MultipathChannel, snr_db: float, cfg: SimConfig,
                        p: LoRaParams) -> SerPoint:
    """Push a symbol stream through the channel and detect window by window.

    The stream is processed in chunks; each chunk carries the last symbol of
    the previous chunk so the channel tail crosses chunk boundaries.
    """
    if symbol_count < 1:
        raise ValueError("symbol_count must be >= 1")
    ch.check(p)
    sigma2 = _sigma2(snr_db)
    m = p.m
    errors = 0
    prev = None
    done = 0
    batch = 0
    while done < symbol_count:
        n = min(cfg.batch_size, symbol_count - done)
        rng = batch_rng(cfg.seed, 0, batch)
        if prev is None and cfg.warmup:
            prev = int(rng.integers(0, m))
        syms = rng.integers(0, m, n)
        if prev is None:
            sig = stream_signal(syms, ch, p)
        else:
            sig = stream_signal(np.concatenate(([prev], syms)), ch, p)[m:]
        r = add_awgn(sig, sigma2, rng).reshape(n, m)
        errors += int(np.count_nonzero(_detect(demod_dft(r, p), cfg.detector) != syms))
        prev = int(syms[-1])
        done += n
        batch += 1
    return SerPoint.from_counts(snr_db, errors, symbol_count)
