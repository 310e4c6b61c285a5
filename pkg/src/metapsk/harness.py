"""Experiment drivers: seeded sweeps, result tables, architecture costs.

Sweeps walk one variable (symbol rate, SNR, or transmit power) across a
grid for one or both transmitter modes.  Every trial is a fresh frame
with its own derived seed, so any point of any sweep can be reproduced
in isolation and a rerun of the same spec is byte-identical.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, replace
from enum import Enum

import numpy as np

from .baseband import TxMode, build_frame, synthesize
from .channel import ChannelConfig, apply_channel, realized_snr_db
from .config import SimConfig
from .receiver import SyncError, measure, receive_frame

SWEEP_RESULTS_NAME = "results.csv"
SWEEP_MANIFEST_NAME = "manifest.json"


class SweepVar(Enum):
    SYMBOL_RATE = "rate"
    SNR = "snr"
    TX_POWER = "power"


@dataclass(frozen=True)
class SweepSpec:
    var: SweepVar
    values: tuple[float, ...]
    modes: tuple[TxMode, ...] = (TxMode.METASURFACE, TxMode.CONVENTIONAL)
    trials: int = 1500
    master_seed: int = 271828

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def default_values(var: SweepVar, cfg: SimConfig) -> tuple[float, ...]:
    grids = {
        SweepVar.SYMBOL_RATE: cfg.rate_grid_hz,
        SweepVar.SNR: cfg.snr_grid_db,
        SweepVar.TX_POWER: cfg.power_grid_dbm,
    }
    return tuple(grids[var])


def derive_seed(master: int, *parts) -> int:
    """Stable 64-bit seed from the master seed and any labels."""
    text = "|".join([str(master), *(str(p) for p in parts)])
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _channel_for(var: SweepVar, value: float, cfg: SimConfig, seed: int) -> ChannelConfig:
    common = dict(seed=seed, link_loss_db=cfg.link_loss_db,
                  noise_floor_dbm=cfg.noise_floor_dbm, budget=cfg.budget())
    if var is SweepVar.TX_POWER:
        return ChannelConfig(tx_power_dbm=value, **common)
    if var is SweepVar.SNR:
        return ChannelConfig(snr_db=value, **common)
    return ChannelConfig(snr_db=cfg.rate_sweep_snr_db, **common)


def run_trial(mode: TxMode, cfg: SimConfig, symbol_rate_hz: float,
              channel: ChannelConfig, seed: int):
    """One frame through the chain; None when synchronization fails."""
    layout = cfg.layout()
    rng = np.random.default_rng(derive_seed(seed, "payload"))
    payload = rng.integers(0, 2, size=layout.payload_bits)
    frame = build_frame(payload, layout)
    wave = synthesize(
        frame, mode, cfg.curve(), cfg.rc(symbol_rate_hz),
        oversampling=cfg.oversampling, symbol_rate_hz=symbol_rate_hz,
        phase_offset_deg=cfg.phase_offset_deg, incident_amplitude=cfg.incident_amplitude,
    )
    rx = apply_channel(wave, replace(channel, seed=derive_seed(seed, "noise")))
    try:
        received = receive_frame(rx, layout, cfg.sync_threshold, cfg.phase_offset_deg)
    except SyncError:
        return None
    return measure(received, payload, frame.data_symbols(), cfg.phase_offset_deg)


@dataclass
class PointResult:
    mode: TxMode
    var: SweepVar
    value: float
    symbol_rate_hz: float
    snr_db: float
    tx_power_dbm: float | None
    ber: float
    ser: float
    evm_rms_pct: float
    est_snr_db: float
    bits: int
    bit_errors: int
    frames: int
    sync_failures: int
    low_confidence: bool


class _PointAccumulator:
    def __init__(self):
        self.bits = 0
        self.bit_errors = 0
        self.symbols = 0
        self.symbol_errors = 0
        self.evm_sq_sum = 0.0
        self.snr_lin_sum = 0.0
        self.frames = 0
        self.sync_failures = 0

    def add(self, metrics) -> None:
        if metrics is None:
            self.sync_failures += 1
            return
        self.frames += 1
        self.bits += metrics.bits_compared
        self.bit_errors += metrics.bit_errors
        self.symbols += metrics.symbols_compared
        self.symbol_errors += metrics.symbol_errors
        self.evm_sq_sum += metrics.evm_rms_pct**2 * metrics.symbols_compared
        self.snr_lin_sum += 10.0 ** (metrics.est_snr_db / 10.0)

    def result(self, mode, var, value, symbol_rate_hz, snr_db, tx_power_dbm, min_errors) -> PointResult:
        bits = max(self.bits, 1)
        symbols = max(self.symbols, 1)
        est_snr = 10.0 * np.log10(self.snr_lin_sum / self.frames) if self.frames else float("nan")
        return PointResult(
            mode=mode, var=var, value=value, symbol_rate_hz=symbol_rate_hz,
            snr_db=snr_db, tx_power_dbm=tx_power_dbm,
            ber=self.bit_errors / bits, ser=self.symbol_errors / symbols,
            evm_rms_pct=float(np.sqrt(self.evm_sq_sum / symbols)),
            est_snr_db=float(est_snr),
            bits=self.bits, bit_errors=self.bit_errors,
            frames=self.frames, sync_failures=self.sync_failures,
            low_confidence=self.bit_errors < min_errors,
        )


def run_point(mode: TxMode, var: SweepVar, value: float, cfg: SimConfig,
              master_seed: int, trials: int,
              min_errors: int | None = None, max_bits: int | None = None,
              paired: bool = False) -> PointResult:
    """Measure one sweep point, stopping at the confidence floor.

    With ``paired=True`` the trial seeds do not include the mode, so runs
    of different modes at the same value see identical payloads and noise
    (common random numbers) and the stopping rule is disabled to keep the
    trial count aligned across modes.
    """
    min_errors = cfg.min_errors if min_errors is None else min_errors
    max_bits = cfg.max_bits if max_bits is None else max_bits
    symbol_rate = value if var is SweepVar.SYMBOL_RATE else cfg.symbol_rate_hz
    channel = _channel_for(var, value, cfg, seed=0)
    snr = realized_snr_db(channel, mode)

    acc = _PointAccumulator()
    for trial in range(trials):
        if paired:
            seed = derive_seed(master_seed, var.value, repr(float(value)), trial)
        else:
            seed = derive_seed(master_seed, mode.value, var.value, repr(float(value)), trial)
        acc.add(run_trial(mode, cfg, symbol_rate, channel, seed))
        if not paired and (acc.bit_errors >= min_errors or acc.bits >= max_bits):
            break
    tx_power = value if var is SweepVar.TX_POWER else None
    return acc.result(mode, var, value, symbol_rate, snr, tx_power, min_errors)


def run_sweep(spec: SweepSpec, cfg: SimConfig | None = None,
              min_errors: int | None = None, max_bits: int | None = None) -> list[PointResult]:
    cfg = SimConfig() if cfg is None else cfg
    results = []
    for mode in spec.modes:
        for value in spec.values:
            results.append(
                run_point(mode, spec.var, value, cfg, spec.master_seed, spec.trials,
                          min_errors=min_errors, max_bits=max_bits)
            )
    return results


def run_paired_point(var: SweepVar, value: float, cfg: SimConfig, master_seed: int,
                     trials: int, modes=(TxMode.METASURFACE, TxMode.CONVENTIONAL)) -> dict:
    """Both modes over identical payload and noise realizations."""
    return {
        mode: run_point(mode, var, value, cfg, master_seed, trials, paired=True)
        for mode in modes
    }


RESULTS_CSV_FIELDS = (
    "mode", "sweep_var", "value", "symbol_rate_hz", "snr_db", "tx_power_dbm",
    "ber", "ser", "evm_rms_pct", "est_snr_db",
    "bits", "bit_errors", "frames", "sync_failures", "low_confidence",
)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_results_csv(path, results: list[PointResult]) -> None:
    """Deterministic result table: same results, same bytes."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_CSV_FIELDS)
        for r in results:
            writer.writerow([
                r.mode.value, r.var.value, _fmt(float(r.value)), _fmt(float(r.symbol_rate_hz)),
                _fmt(float(r.snr_db)), _fmt(r.tx_power_dbm if r.tx_power_dbm is None else float(r.tx_power_dbm)),
                _fmt(float(r.ber)), _fmt(float(r.ser)), _fmt(float(r.evm_rms_pct)), _fmt(float(r.est_snr_db)),
                r.bits, r.bit_errors, r.frames, r.sync_failures, _fmt(r.low_confidence),
            ])


def read_results_csv(path) -> list[PointResult]:
    results = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            results.append(PointResult(
                mode=TxMode(row["mode"]),
                var=SweepVar(row["sweep_var"]),
                value=float(row["value"]),
                symbol_rate_hz=float(row["symbol_rate_hz"]),
                snr_db=float(row["snr_db"]),
                tx_power_dbm=float(row["tx_power_dbm"]) if row["tx_power_dbm"] else None,
                ber=float(row["ber"]),
                ser=float(row["ser"]),
                evm_rms_pct=float(row["evm_rms_pct"]),
                est_snr_db=float(row["est_snr_db"]),
                bits=int(row["bits"]),
                bit_errors=int(row["bit_errors"]),
                frames=int(row["frames"]),
                sync_failures=int(row["sync_failures"]),
                low_confidence=row["low_confidence"] == "1",
            ))
    return results


def write_manifest(path, spec: SweepSpec, cfg: SimConfig) -> None:
    from . import __version__

    manifest = {
        "package_version": __version__,
        "sweep": {
            "var": spec.var.value,
            "values": [float(v) for v in spec.values],
            "modes": [m.value for m in spec.modes],
            "trials": spec.trials,
            "master_seed": spec.master_seed,
        },
        "config": asdict(cfg),
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class HardwareCounts:
    power_amplifiers: int
    mixers: int
    filters: int


def hardware_counts(channels: int, architecture: TxMode) -> HardwareCounts:
    """RF front-end component counts for ``channels`` radiating elements.

    The surface transmitter drives every cell from one amplified carrier
    and modulates in the reflection domain, so its counts do not grow
    with the aperture.  A conventional phased transmitter needs one PA
    per element plus I/Q mixer and filter pairs.
    """
    if channels < 1:
        raise ValueError("channels must be >= 1")
    if architecture is TxMode.METASURFACE:
        return HardwareCounts(power_amplifiers=1, mixers=0, filters=0)
    return HardwareCounts(power_amplifiers=channels, mixers=2 * channels, filters=2 * channels)


@dataclass(frozen=True)
class ModeGap:
    target_ber: float
    metasurface_value: float | None
    conventional_value: float | None
    gap_db: float | None
    note: str = ""


def _crossing(points: list[PointResult], target: float) -> float | None:
    """Sweep value where the BER curve crosses ``target``.

    Linear interpolation of log10(BER) against the sweep value; points
    with zero errors carry no level information and are skipped.
    """
    usable = sorted((p for p in points if p.ber > 0.0), key=lambda p: p.value)
    for a, b in zip(usable, usable[1:]):
        lo, hi = sorted((a.ber, b.ber))
        if lo <= target <= hi:
            if a.ber == b.ber:
                return float(a.value)
            la, lb, lt = np.log10([a.ber, b.ber, target])
            return float(a.value + (b.value - a.value) * (lt - la) / (lb - la))
    return None


def compare_modes(results: list[PointResult], targets=(1e-2, 3e-3, 1e-3)) -> list[ModeGap]:
    """Horizontal dB gap (metasurface minus conventional) at target BERs.

    Expects SNR- or power-sweep results covering both modes.
    """
    surf = [r for r in results if r.mode is TxMode.METASURFACE]
    conv = [r for r in results if r.mode is TxMode.CONVENTIONAL]
    if not surf or not conv:
        raise ValueError("need results for both modes")
    gaps = []
    for target in targets:
        xs = _crossing(surf, target)
        xc = _crossing(conv, target)
        if xs is None or xc is None:
            missing = " and ".join(
                name for name, x in (("metasurface", xs), ("conventional", xc)) if x is None
            )
            gaps.append(ModeGap(target, xs, xc, None, f"target outside measured {missing} curve"))
        else:
            gaps.append(ModeGap(target, xs, xc, xs - xc))
    return gaps
