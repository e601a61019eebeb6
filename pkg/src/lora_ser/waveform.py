"""LoRa chirp waveforms, dechirping and the DFT detector.

Sampling is at the chip rate (one sample per chip, unit sample period), so a
symbol occupies exactly ``M = 2**SF`` samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SF_RANGE = range(7, 13)


@dataclass(frozen=True)
class LoRaParams:
    sf: int

    def __post_init__(self):
        if int(self.sf) != self.sf or self.sf not in SF_RANGE:
            raise ValueError(f"spreading factor must be in 7..12, got {self.sf!r}")

    @property
    def m(self) -> int:
        return 1 << self.sf

    def check_symbol(self, a) -> int:
        if isinstance(a, (bool, np.bool_)) or int(a) != a or not 0 <= a < self.m:
            raise ValueError(f"symbol {a!r} outside [0, {self.m})")
        return int(a)


def chirp_samples(a, k, m: int) -> np.ndarray:
    """Evaluate ``x_a[k] = exp(2j*pi*k*(a/M - 1/2 + k/(2M)))`` for any integer k.

    ``a`` and ``k`` broadcast.  The sequence is M-periodic in k (M even), so
    negative or >= M indices are valid and equal their value mod M.
    """
    a = np.asarray(a, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)
    # Phase in cycles, reduced exactly with integer arithmetic:
    # k*a/M - k/2 + k^2/(2M) = (2*k*a - k*M + k^2) / (2M)
    num = np.mod(2 * k * a - k * m + k * k, 2 * m)
    return np.exp(1j * np.pi * num / m)


def modulate(a: int, p: LoRaParams) -> np.ndarray:
    a = p.check_symbol(a)
    return chirp_samples(a, np.arange(p.m), p.m)


def downchirp(p: LoRaParams) -> np.ndarray:
    return np.conj(chirp_samples(0, np.arange(p.m), p.m))


def dechirp(frame, p: LoRaParams) -> np.ndarray:
    """Multiply by the conjugate base chirp.  Works on (..., M) batches."""
    frame = np.asarray(frame, dtype=complex)
    if frame.shape[-1] != p.m:
        raise ValueError(f"frame length {frame.shape[-1]} != M = {p.m}")
    return frame * downchirp(p)


def demod_dft(frame, p: LoRaParams) -> np.ndarray:
    """Dechirp then DFT (no normalisation): bin a of a clean symbol a is M."""
    return np.fft.fft(dechirp(frame, p), axis=-1)


def _argmax_last(x):
    # np.argmax returns the first maximum, i.e. the lowest index on ties
    idx = np.argmax(x, axis=-1)
    return int(idx) if np.ndim(idx) == 0 else idx


def detect_noncoherent(spectrum) -> int | np.ndarray:
    """Bin of largest magnitude (per row for a batch of spectra)."""
    return _argmax_last(np.abs(np.asarray(spectrum)))


def detect_coherent(spectrum) -> int | np.ndarray:
    """Bin of largest real part; assumes the first path has zero phase."""
    return _argmax_last(np.real(np.asarray(spectrum)))
