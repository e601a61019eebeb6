"""LoRa symbol error rate over multipath channels and same-SF interference.

Semi-analytic SER engines (Gauss-Hermite averaged chi-square products), the
exact noiseless DFT expressions they approximate, and a seeded Monte Carlo
harness to check them.
"""

from .channel import (
    InterfererConfig,
    MultipathChannel,
    NoiseConfig,
    exp_decay_channel,
    read_channel_file,
    write_channel_file,
)
from .montecarlo import SerPoint, SimConfig, simulate_interference, simulate_mpc, simulate_stream_mpc
from .ser_interference import (
    InterfCase,
    phi_extremes,
    ser_interference,
    ser_interference_reduced,
    tau_sweep_grid,
)
from .ser_mpc import CaseTag, ser_mpc, ser_mpc_coherent, ser_mpc_noncoherent
from .special_fn import gauss_hermite, marcum_q1
from .waveform import LoRaParams, demod_dft, detect_coherent, detect_noncoherent, modulate

__version__ = "0.1.0"

__all__ = [
    "CaseTag",
    "InterfCase",
    "InterfererConfig",
    "LoRaParams",
    "MultipathChannel",
    "NoiseConfig",
    "SerPoint",
    "SimConfig",
    "demod_dft",
    "detect_coherent",
    "detect_noncoherent",
    "exp_decay_channel",
    "gauss_hermite",
    "marcum_q1",
    "modulate",
    "phi_extremes",
    "read_channel_file",
    "ser_interference",
    "ser_interference_reduced",
    "ser_mpc",
    "ser_mpc_coherent",
    "ser_mpc_noncoherent",
    "simulate_interference",
    "simulate_mpc",
    "simulate_stream_mpc",
    "tau_sweep_grid",
    "write_channel_file",
]
