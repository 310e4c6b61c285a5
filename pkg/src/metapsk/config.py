"""Simulation configuration: one flat dataclass, one key = value file.

Every tunable default of the simulator lives here so a single file can
reproduce a run.  The file format is deliberately plain: one ``key =
value`` pair per line, ``#`` starts a comment, lists are comma-separated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import get_args, get_origin

from .baseband import FrameLayout
from .cell import RcDynamics, VoltagePhaseCurve
from .channel import REFLECTIVITY_LOSS_DB, LossBudget
from .surface import SurfaceGeometry


@dataclass
class SimConfig:
    # unit cell
    v_min: float = 0.0                      # bias range low end, volts
    v_max: float = 20.0                     # bias range high end, volts
    phase_at_vmin_deg: float = -180.0       # reflection phase at v_min
    phase_span_deg: float = 360.0           # phase travel across the bias range
    cell_amplitude: float = math.sqrt(0.85)  # reflection magnitude, sqrt(power reflectivity)
    tau_s: float = 40e-9                    # bias-line settling time constant, seconds
    phase_offset_deg: float = 0.0           # constellation rotation

    # surface
    rows: int = 8
    cols: int = 32
    cell_pitch_m: float = 0.012
    carrier_freq_hz: float = 4.25e9
    incident_amplitude: float = 1.0

    # framing and baseband
    sync_len: int = 64
    pilot_len: int = 32
    data_len: int = 256
    oversampling: int = 8
    symbol_rate_hz: float = 2.048e6

    # channel and link budget
    link_loss_db: float = 50.0              # antenna-to-antenna loss, dB
    noise_floor_dbm: float = -95.0          # receiver noise power in the sample bandwidth
    reflectivity_loss_db: float = REFLECTIVITY_LOSS_DB
    modulation_excess_loss_db: float = 6.0 - REFLECTIVITY_LOSS_DB

    # receiver
    sync_threshold: float = 0.5             # minimum normalized correlation peak
    min_errors: int = 100                   # confidence floor per reported BER point
    max_bits: int = 10_000_000              # bit budget per reported BER point

    # sweep defaults
    trials: int = 1500                      # frame budget per sweep point
    snr_grid_db: tuple = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0)
    rate_grid_hz: tuple = (0.256e6, 0.512e6, 1.024e6, 2.048e6, 4.096e6)
    power_grid_dbm: tuple = (-40.0, -38.0, -36.0, -34.0, -32.0, -30.0,
                             -28.0, -26.0, -24.0, -22.0, -20.0, -18.0, -16.0)
    rate_sweep_snr_db: float = 14.0         # fixed channel SNR for symbol-rate sweeps

    # glue: build the per-module objects this config describes

    def curve(self) -> VoltagePhaseCurve:
        return VoltagePhaseCurve(self.v_min, self.v_max, self.phase_at_vmin_deg,
                                 self.phase_span_deg, self.cell_amplitude)

    def rc(self, symbol_rate_hz: float | None = None) -> RcDynamics:
        rate = self.symbol_rate_hz if symbol_rate_hz is None else symbol_rate_hz
        return RcDynamics(self.tau_s, 1.0 / (rate * self.oversampling))

    def geometry(self) -> SurfaceGeometry:
        return SurfaceGeometry(self.rows, self.cols, self.cell_pitch_m, self.carrier_freq_hz)

    def layout(self) -> FrameLayout:
        return FrameLayout(self.sync_len, self.pilot_len, self.data_len)

    def budget(self) -> LossBudget:
        return LossBudget(self.reflectivity_loss_db, self.modulation_excess_loss_db)


def _parse_value(text: str, annotation):
    if annotation is int:
        return int(text)
    if annotation is float:
        return float(text)
    if annotation is tuple or get_origin(annotation) is tuple:
        parts = [p for p in (s.strip() for s in text.split(",")) if p]
        args = get_args(annotation)
        elem = args[0] if args else float
        return tuple(elem(p) for p in parts)
    raise TypeError(f"unsupported config field type {annotation!r}")


def load_config(path) -> SimConfig:
    """Parse a key = value file into a SimConfig; unknown keys fail loudly."""
    known = {f.name: f.type for f in fields(SimConfig)}
    types = {"int": int, "float": float, "tuple": tuple}
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, text = line.partition("=")
            key = key.strip()
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            annotation = known[key]
            if isinstance(annotation, str):
                annotation = types.get(annotation, float)
            values[key] = _parse_value(text.strip(), annotation)
    return SimConfig(**values)


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def save_config(cfg: SimConfig, path) -> None:
    """Write the config as a commented key = value file."""
    lines = [
        "# Link simulator configuration.",
        "# One 'key = value' per line; '#' starts a comment; lists are comma-separated.",
        "",
    ]
    for f in fields(cfg):
        lines.append(f"{f.name} = {_format_value(getattr(cfg, f.name))}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
