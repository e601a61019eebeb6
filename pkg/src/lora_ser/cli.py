"""Command-line SER sweeps and experiment presets with CSV output.

Examples::

    lora-ser mpc theory --sf 7 --taps "0:1,1:0.7" --snr -20:-5:0.5
    lora-ser mpc both --sf 7 --taps "0:1,10:0.9" --detector coherent --trials 100000
    lora-ser interference theory --sf 8 --tau 64 --sir-db 3 --snr -12:-4:1
    lora-ser preset fig10 --sf 8 --sir-db 3 --out fig10/
    lora-ser preset table1 --sf 7

Every CSV has a header row, ``snr_db`` as first column and a ``source``
column (``theory`` or ``sim``).  Sweeps write a single table (stdout unless
``--out FILE``).  Presets write one file per curve into ``--out DIR``, or,
without ``--out``, one long table on stdout with a trailing ``curve`` column.

Exit codes: 0 success, 2 invalid arguments, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from scipy.optimize import brentq

from .channel import InterfererConfig, MultipathChannel, exp_decay_channel, read_channel_file
from .montecarlo import DETECTORS, SerPoint, SimConfig, simulate_interference, simulate_mpc
from .ser_interference import phi_extremes, ser_interference, tau_sweep_grid
from .ser_mpc import DEFAULT_GH_POINTS, find_snr_at_ser, ser_mpc
from .waveform import LoRaParams

PRESETS = ("fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "table1")
MODES = ("theory", "sim", "both")

MPC_COLUMNS = ["snr_db", "ser", "source", "errors", "trials", "sf", "detector", "channel"]
INTERF_COLUMNS = ["snr_db", "ser", "source", "errors", "trials", "sf", "detector", "tau", "sir_db", "phi"]

# target one-path SER that sets the SNR of each SF's tau sweep
TAU_SWEEP_AWGN_SER = {8: 0.9781e-5, 10: 0.4788e-5, 12: 0.1792e-5}
TABLE1_ALPHAS = (0.0, 0.4, 0.5, 0.6, 0.7, 0.8)
TABLE1_TARGET_SER = 1e-8

# Flags whose value may legitimately start with '-' (negative dB values).
_VALUE_FLAGS = ("--snr", "--sir-db", "--sir", "--phi")


class SpecError(ValueError):
    """Invalid sweep or preset request (exit code 2)."""


# ---------------------------------------------------------------- parsing


def parse_snr_range(text: str) -> list[float]:
    """``start:stop:step`` in dB, stop included when it lies on the grid; a bare number is one point."""
    parts = text.split(":")
    if len(parts) == 1:
        try:
            return [float(parts[0])]
        except ValueError:
            raise SpecError(f"SNR must be numeric, got {text!r}") from None
    if len(parts) != 3:
        raise SpecError(f"SNR range must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(x) for x in parts)
    except ValueError:
        raise SpecError(f"SNR range must be numeric, got {text!r}") from None
    if not step > 0:
        raise SpecError("SNR step must be > 0")
    if not start < stop:
        raise SpecError("SNR start must be < stop")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(n)]


def parse_taps(text: str) -> MultipathChannel:
    """``"0:1,1:0.7"`` or with complex gains ``"0:1,3:0.5-0.2j"``."""
    taps = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        delay, sep, gain = item.partition(":")
        if not sep:
            raise SpecError(f"tap {item!r} must be delay:gain")
        try:
            taps.append((int(delay), complex(gain.replace(" ", ""))))
        except ValueError:
            raise SpecError(f"cannot parse tap {item!r}") from None
    try:
        return MultipathChannel.from_taps(taps)
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, complex):
        return repr(x.real) if x.imag == 0 else repr(x)
    return str(x)


def channel_label(ch: MultipathChannel) -> str:
    return ";".join(f"{d}:{_fmt(g)}" for d, g in ch.taps)


# ---------------------------------------------------------------- sweeps


@dataclass(frozen=True)
class SweepSpec:
    scenario: str
    mode: str
    sf: int
    snr_db: tuple[float, ...]
    detector: str = "noncoherent"
    channel: MultipathChannel | None = None
    interferer: InterfererConfig | None = None
    trials: int = 100_000
    seed: int = 0
    gh_points: int = DEFAULT_GH_POINTS
    workers: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.scenario not in ("mpc", "interference"):
            raise SpecError(f"unknown scenario {self.scenario!r}")
        if self.mode not in MODES:
            raise SpecError(f"mode must be one of {MODES}")
        if self.detector not in DETECTORS:
            raise SpecError(f"detector must be one of {DETECTORS}")
        if not self.snr_db:
            raise SpecError("empty SNR grid")
        if self.trials < 1 or self.workers < 1:
            raise SpecError("trials and workers must be >= 1")
        if not 1 <= self.gh_points <= 64:
            raise SpecError("gh-points must be in [1, 64]")
        try:
            p = LoRaParams(self.sf)
        except ValueError as exc:
            raise SpecError(str(exc)) from None
        if self.scenario == "mpc":
            if self.channel is None:
                raise SpecError("mpc sweep needs a channel (--taps, --channel-file or --rho)")
            try:
                self.channel.check(p)
            except ValueError as exc:
                raise SpecError(str(exc)) from None
        else:
            if self.interferer is None:
                raise SpecError("interference sweep needs --tau and --sir-db")
            try:
                self.interferer.check(p)
            except ValueError as exc:
                raise SpecError(str(exc)) from None
            if self.detector != "noncoherent" and self.mode != "sim":
                raise SpecError("interference theory is available for the non-coherent detector only")

    @property
    def params(self) -> LoRaParams:
        return LoRaParams(self.sf)

    @property
    def columns(self) -> list[str]:
        return MPC_COLUMNS if self.scenario == "mpc" else INTERF_COLUMNS


def _sigma2(snr_db: float) -> float:
    return 10.0 ** (-snr_db / 10.0)


def _pool_map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


def _theory_points(spec: SweepSpec) -> list[SerPoint]:
    p = spec.params
    if spec.scenario == "mpc":
        def fn(s):
            return ser_mpc(spec.channel, _sigma2(s), p, spec.detector, spec.gh_points)
    else:
        def fn(s):
            return ser_interference(spec.interferer, _sigma2(s), p, spec.gh_points)
    sers = _pool_map(fn, spec.snr_db, spec.workers)
    return [SerPoint.theory(s, v) for s, v in zip(spec.snr_db, sers)]


def _sim_points(spec: SweepSpec) -> list[SerPoint]:
    cfg = SimConfig(trials=spec.trials, seed=spec.seed, detector=spec.detector, workers=spec.workers)
    if spec.scenario == "mpc":
        return simulate_mpc(spec.channel, spec.snr_db, cfg, spec.params)
    return simulate_interference(spec.interferer, spec.snr_db, cfg, spec.params)


def _rows(spec: SweepSpec, points: list[SerPoint]) -> list[dict]:
    rows = []
    for pt in points:
        row = {
            "snr_db": pt.snr_db,
            "ser": pt.ser,
            "source": pt.source,
            "errors": pt.errors if pt.source == "sim" else None,
            "trials": pt.trials if pt.source == "sim" else None,
            "sf": spec.sf,
            "detector": spec.detector,
        }
        if spec.scenario == "mpc":
            row["channel"] = channel_label(spec.channel)
        else:
            icfg = spec.interferer
            row.update(tau=icfg.tau, sir_db=round(-10.0 * math.log10(icfg.p_i), 10), phi=icfg.phi)
        rows.append(row)
    return rows


def run_sweep(spec: SweepSpec) -> list[dict]:
    """Evaluate the sweep; theory rows first, then simulation rows, each in grid order."""
    rows = []
    if spec.mode in ("theory", "both"):
        rows += _rows(spec, _theory_points(spec))
    if spec.mode in ("sim", "both"):
        rows += _rows(spec, _sim_points(spec))
    return rows


# ---------------------------------------------------------------- CSV


def render_csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


@dataclass
class Curve:
    name: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)


def write_curves(curves: Sequence[Curve], out: str | None) -> None:
    """One file per curve in directory ``out``; otherwise one long table on stdout."""
    if out is None:
        columns = list(curves[0].columns)
        for c in curves[1:]:
            columns += [k for k in c.columns if k not in columns]
        columns.append("curve")
        rows = [dict(r, curve=c.name) for c in curves for r in c.rows]
        sys.stdout.write(render_csv(columns, rows))
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    for c in curves:
        path = d / f"{c.name}.csv"
        path.write_text(render_csv(c.columns, c.rows))
        print(path)


# ---------------------------------------------------------------- presets


@dataclass(frozen=True)
class PresetOptions:
    sf: int | None = None
    snr_db: tuple[float, ...] | None = None
    sir_db: float | None = None
    mode: str | None = None
    trials: int = 100_000
    seed: int = 0
    gh_points: int = DEFAULT_GH_POINTS
    workers: int = 1


def _num(x: float) -> str:
    return f"{x:g}"


def _mpc_curves(tag: str, sf: int, ch: MultipathChannel, detector: str, mode: str,
                grid: Sequence[float], opts: PresetOptions) -> list[Curve]:
    spec = SweepSpec("mpc", "theory", sf, tuple(grid), detector, channel=ch, trials=opts.trials,
                     seed=opts.seed, gh_points=opts.gh_points, workers=opts.workers)
    curves = []
    for source in ("theory", "sim"):
        if mode in (source, "both"):
            rows = _rows(spec, _theory_points(spec) if source == "theory" else _sim_points(spec))
            curves.append(Curve(f"{tag}_{detector}_{source}", MPC_COLUMNS, rows))
    return curves


def _sf_list(opts: PresetOptions, default: Sequence[int]) -> list[int]:
    return [opts.sf] if opts.sf is not None else list(default)


def preset_fig6(opts: PresetOptions) -> list[Curve]:
    """Two-path validation: theory and simulation, both detectors."""
    grid = opts.snr_db or tuple(parse_snr_range("-15:5:1"))
    mode = opts.mode or "both"
    curves = []
    for sf in _sf_list(opts, [7]):
        for k1, a1 in ((1, 0.7), (10, 0.9)):
            ch = MultipathChannel.two_path(a1, k1)
            for det in DETECTORS:
                curves += _mpc_curves(f"fig6_sf{sf}_k{k1}_a{_num(a1)}", sf, ch, det, mode, grid, opts)
    return curves


def _theory_mpc(tag: str, sf: int, ch: MultipathChannel, grid, opts) -> list[Curve]:
    return _mpc_curves(tag, sf, ch, "noncoherent", "theory", grid, opts)


def _one_path() -> MultipathChannel:
    return MultipathChannel((0,), (1.0,))


def preset_fig7(opts: PresetOptions) -> list[Curve]:
    """Echo gain and delay sweep at one SF (alpha1 = 0 is the one-path channel)."""
    grid = opts.snr_db or tuple(parse_snr_range("-20:15:0.5"))
    curves = []
    for sf in _sf_list(opts, [7]):
        curves += _theory_mpc(f"fig7_sf{sf}_a0", sf, _one_path(), grid, opts)
        for a1 in (0.2, 0.4, 0.6, 0.8, 0.9):
            for k1 in (1, 3, 5, 7, 9, 11):
                ch = MultipathChannel.two_path(a1, k1)
                curves += _theory_mpc(f"fig7_sf{sf}_k{k1}_a{_num(a1)}", sf, ch, grid, opts)
    return curves


def preset_fig8(opts: PresetOptions) -> list[Curve]:
    """Echo gain versus SF for a one-sample echo."""
    grid = opts.snr_db or tuple(parse_snr_range("-25:15:0.5"))
    curves = []
    for sf in _sf_list(opts, [7, 8, 9, 10]):
        curves += _theory_mpc(f"fig8_sf{sf}_a0", sf, _one_path(), grid, opts)
        for a1 in (0.4, 0.8):
            curves += _theory_mpc(f"fig8_sf{sf}_k1_a{_num(a1)}", sf, MultipathChannel.two_path(a1, 1), grid, opts)
    return curves


def preset_fig9(opts: PresetOptions) -> list[Curve]:
    """Two-path channel with alpha1 = rho against the exponentially decaying channel."""
    grid = opts.snr_db or tuple(parse_snr_range("-25:15:0.5"))
    curves = []
    for sf in _sf_list(opts, [7, 10]):
        for rho in (0.7, 0.8):
            curves += _theory_mpc(f"fig9_sf{sf}_twopath_rho{_num(rho)}", sf, MultipathChannel.two_path(rho, 1),
                                  grid, opts)
            curves += _theory_mpc(f"fig9_sf{sf}_expdecay_rho{_num(rho)}", sf, exp_decay_channel(rho), grid, opts)
    return curves


def awgn_snr_at(ser_target: float, p: LoRaParams, gh_points: int = DEFAULT_GH_POINTS) -> float:
    """SNR (dB) at which the one-path non-coherent SER equals ``ser_target``."""
    ch = _one_path()

    def f(snr_db):
        ser = ser_mpc(ch, _sigma2(snr_db), p, "noncoherent", gh_points)
        return math.log(max(ser, 1e-300)) - math.log(ser_target)

    return float(brentq(f, -40.0, 20.0, xtol=1e-6))


def tau_phases(tau: int, p: LoRaParams) -> tuple[float, float]:
    """(worst, best) interferer phase; at tau = 0 the two peaks add directly, worst is pi."""
    if tau == 0:
        return math.pi, 0.0
    return phi_extremes(tau, p)


def preset_fig10(opts: PresetOptions) -> list[Curve]:
    """SER against the interferer delay on the tau_step grid, at the worst and best phase."""
    sf = opts.sf or 8
    p = LoRaParams(sf)
    sir_db = 3.0 if opts.sir_db is None else opts.sir_db
    mode = opts.mode or "theory"
    snrs = opts.snr_db or (round(awgn_snr_at(TAU_SWEEP_AWGN_SER.get(sf, 1e-5), p, opts.gh_points), 4),)
    taus = tau_sweep_grid(p)
    curves = []
    cfg = SimConfig(trials=opts.trials, seed=opts.seed, workers=opts.workers)
    for snr in snrs:
        for label, idx in (("phimin", 0), ("phimax", 1)):
            configs = [InterfererConfig.from_sir_db(t, sir_db, tau_phases(t, p)[idx]) for t in taus]
            for source in ("theory", "sim"):
                if mode not in (source, "both"):
                    continue
                if source == "theory":
                    vals = _pool_map(lambda c: ser_interference(c, _sigma2(snr), p, opts.gh_points), configs,
                                     opts.workers)
                    points = [SerPoint.theory(snr, v) for v in vals]
                else:
                    points = [simulate_interference(c, [snr], cfg, p)[0] for c in configs]
                rows = []
                for c, pt in zip(configs, points):
                    rows.append({
                        "snr_db": snr, "ser": pt.ser, "source": source,
                        "errors": pt.errors if source == "sim" else None,
                        "trials": pt.trials if source == "sim" else None,
                        "sf": sf, "detector": "noncoherent", "tau": c.tau, "sir_db": sir_db, "phi": c.phi,
                        "phase": label,
                    })
                curves.append(Curve(f"fig10_sf{sf}_sir{_num(sir_db)}_snr{_num(snr)}_{label}_{source}",
                                    INTERF_COLUMNS + ["phase"], rows))
    return curves


def preset_fig11(opts: PresetOptions) -> list[Curve]:
    """Worst and best interferer delay; bit error rate approximated as SER / 2."""
    grid = opts.snr_db or tuple(parse_snr_range("-20:0:0.5"))
    sir_db = 6.0 if opts.sir_db is None else opts.sir_db
    columns = ["snr_db", "ser", "source", "ber_approx", "sf", "detector", "tau", "sir_db", "phi"]
    curves = []
    for sf in _sf_list(opts, [7, 8, 9]):
        p = LoRaParams(sf)
        for tau in (1, p.m // 2 - 1):
            icfg = InterfererConfig.from_sir_db(tau, sir_db, 0.0)
            spec = SweepSpec("interference", "theory", sf, tuple(grid), interferer=icfg,
                             gh_points=opts.gh_points, workers=opts.workers)
            rows = _rows(spec, _theory_points(spec))
            for r in rows:
                r["ber_approx"] = r["ser"] / 2.0
            curves.append(Curve(f"fig11_sf{sf}_tau{tau}_sir{_num(sir_db)}_theory", columns, rows))
    return curves


@dataclass(frozen=True)
class LossRow:
    sf: int
    alpha_from: float
    alpha_to: float
    snr_from_db: float
    snr_to_db: float

    @property
    def delta_db(self) -> float:
        return self.snr_to_db - self.snr_from_db


def table1_losses(sf: int, gh_points: int = DEFAULT_GH_POINTS, alphas: Sequence[float] = TABLE1_ALPHAS,
                  target: float = TABLE1_TARGET_SER) -> list[LossRow]:
    """SNR losses at ``target`` SER between successive echo gains (one-sample echo)."""
    p = LoRaParams(sf)
    snrs = []
    for a1 in alphas:
        ch = _one_path() if a1 == 0 else MultipathChannel.two_path(a1, 1)
        snrs.append(find_snr_at_ser(lambda s2, ch=ch: ser_mpc(ch, s2, p, "noncoherent", gh_points), target))
    return [LossRow(sf, a, b, s0, s1) for a, b, s0, s1 in zip(alphas, alphas[1:], snrs, snrs[1:])]


def preset_table1(opts: PresetOptions, out: str | None) -> None:
    columns = ["sf", "alpha_from", "alpha_to", "snr_from_db", "snr_to_db", "delta_db"]
    for sf in _sf_list(opts, [7]):
        rows = table1_losses(sf, opts.gh_points)
        print(f"SF {sf}: SNR loss at SER {TABLE1_TARGET_SER:g}, echo at delay 1")
        for i, r in enumerate(rows, 1):
            print(f"  delta{i}  alpha {_num(r.alpha_from)} -> {_num(r.alpha_to)}:  {r.delta_db:.2f} dB")
        print(f"  cumulative alpha {_num(rows[0].alpha_from)} -> {_num(rows[-1].alpha_to)}:  "
              f"{sum(r.delta_db for r in rows):.2f} dB")
        if out is not None:
            d = Path(out)
            d.mkdir(parents=True, exist_ok=True)
            dicts = [dict(sf=r.sf, alpha_from=r.alpha_from, alpha_to=r.alpha_to, snr_from_db=r.snr_from_db,
                          snr_to_db=r.snr_to_db, delta_db=r.delta_db) for r in rows]
            (d / f"table1_sf{sf}.csv").write_text(render_csv(columns, dicts))


PRESET_BUILDERS: dict[str, Callable[[PresetOptions], list[Curve]]] = {
    "fig6": preset_fig6,
    "fig7": preset_fig7,
    "fig8": preset_fig8,
    "fig9": preset_fig9,
    "fig10": preset_fig10,
    "fig11": preset_fig11,
}


# ---------------------------------------------------------------- argument handling


def _add_common(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--sf", type=int, help="spreading factor, 7..12")
    ap.add_argument("--snr", help="SNR grid start:stop:step in dB, inclusive")
    ap.add_argument("--trials", type=int, default=100_000, help="Monte Carlo trials per SNR point")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--gh-points", type=int, default=DEFAULT_GH_POINTS, help="Gauss-Hermite points per axis")
    ap.add_argument("--workers", type=int, default=1, help="worker threads")
    ap.add_argument("--out", help="output file (sweeps) or directory (presets)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lora-ser", description="LoRa SER sweeps: semi-analytic and Monte Carlo.")
    sub = ap.add_subparsers(dest="command", required=True)

    mpc = sub.add_parser("mpc", help="multipath channel sweep")
    mpc.add_argument("mode", choices=MODES)
    _add_common(mpc)
    mpc.add_argument("--detector", choices=DETECTORS, default="noncoherent")
    chan = mpc.add_mutually_exclusive_group(required=True)
    chan.add_argument("--taps", help='tap list "delay:gain,...", e.g. "0:1,1:0.7"')
    chan.add_argument("--channel-file", help="file with 'delay gain_re gain_im' lines")
    chan.add_argument("--rho", type=float, help="exponentially decaying channel rho**i")

    itf = sub.add_parser("interference", help="one aligned same-SF interferer")
    itf.add_argument("mode", choices=MODES)
    _add_common(itf)
    itf.add_argument("--detector", choices=DETECTORS, default="noncoherent")
    itf.add_argument("--tau", type=int, required=True, help="interferer delay in samples")
    itf.add_argument("--sir-db", "--sir", dest="sir_db", type=float, required=True)
    itf.add_argument("--phi", type=float, default=0.0, help="interferer phase in radians")

    pre = sub.add_parser("preset", help="reproduce an experiment grid")
    pre.add_argument("name", choices=PRESETS)
    _add_common(pre)
    pre.add_argument("--sir-db", "--sir", dest="sir_db", type=float)
    pre.add_argument("--mode", choices=MODES, help="theory/sim selection where a preset has both")
    return ap


def _normalise_argv(argv: Sequence[str]) -> list[str]:
    """Glue ``--snr -20:-5:1`` into ``--snr=-20:-5:1`` so argparse accepts the leading '-'."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _sweep_from_args(args) -> SweepSpec:
    sf = 7 if args.sf is None else args.sf
    grid = tuple(parse_snr_range(args.snr or "-20:0:1"))
    channel = interferer = None
    if args.command == "mpc":
        if args.taps is not None:
            channel = parse_taps(args.taps)
        elif args.channel_file is not None:
            channel = read_channel_file(args.channel_file)
        else:
            try:
                channel = exp_decay_channel(args.rho)
            except ValueError as exc:
                raise SpecError(str(exc)) from None
    else:
        try:
            interferer = InterfererConfig.from_sir_db(args.tau, args.sir_db, args.phi)
        except ValueError as exc:
            raise SpecError(str(exc)) from None
    return SweepSpec(args.command, args.mode, sf, grid, args.detector, channel, interferer, args.trials,
                     args.seed, args.gh_points, args.workers, args.out)


def _preset_from_args(args) -> PresetOptions:
    if args.sf is not None:
        try:
            LoRaParams(args.sf)
        except ValueError as exc:
            raise SpecError(str(exc)) from None
    if args.trials < 1 or args.workers < 1:
        raise SpecError("trials and workers must be >= 1")
    if not 1 <= args.gh_points <= 64:
        raise SpecError("gh-points must be in [1, 64]")
    grid = tuple(parse_snr_range(args.snr)) if args.snr else None
    return PresetOptions(args.sf, grid, args.sir_db, args.mode, args.trials, args.seed, args.gh_points,
                         args.workers)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_normalise_argv(argv))
    except SystemExit as exc:  # argparse already printed usage/errors
        return int(exc.code or 0)
    try:
        if args.command == "preset":
            opts = _preset_from_args(args)
            if args.name == "table1":
                preset_table1(opts, args.out)
            else:
                write_curves(PRESET_BUILDERS[args.name](opts), args.out)
        else:
            spec = _sweep_from_args(args)
            _write_text(render_csv(spec.columns, run_sweep(spec)), spec.out)
    except OSError as exc:
        print(f"lora-ser: I/O error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"lora-ser: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
