"""8PSK framing and complex-baseband waveform synthesis.

Two transmitter models share one frame format.  The conventional model
emits ideal unit-magnitude constellation points.  The surface model drives
a shared bias line through a first-order lag and reflects the carrier off
the cell grid, so its samples carry the cell amplitude and the finite
settling of the bias line.  Pulses are rectangular; each symbol is held
for ``oversampling`` samples and no shaping filter is applied.

Symbols are plain integer indices 0..7; the transmitted phase of index k
is ``phase_offset_deg + k * 45 deg``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cell import PSK_STEP_DEG, RcDynamics, VoltagePhaseCurve, bias_voltage_table, voltage_trajectory
from .surface import uniform_reflection

BITS_PER_SYMBOL = 3
DATA_SUBFRAMES = 9


class TxMode(Enum):
    METASURFACE = "metasurface"
    CONVENTIONAL = "conventional"


# Gray labelling: bit triples of adjacent constellation points differ in
# exactly one position.  _GRAY_FROM_INDEX[k] is the bit word of symbol k.
_GRAY_FROM_INDEX = np.array([k ^ (k >> 1) for k in range(8)])
_INDEX_FROM_GRAY = np.argsort(_GRAY_FROM_INDEX)


def map_bits(bits) -> int:
    """Map one bit triple (MSB first) to its symbol index."""
    b = np.asarray(bits, dtype=int)
    if b.shape != (BITS_PER_SYMBOL,):
        raise ValueError("expected exactly three bits")
    if not np.all((b == 0) | (b == 1)):
        raise ValueError("bits must be 0 or 1")
    word = (b[0] << 2) | (b[1] << 1) | b[2]
    return int(_INDEX_FROM_GRAY[word])


def bits_to_symbols(bits) -> np.ndarray:
    """Vectorized bit-triple to symbol-index mapping."""
    b = np.asarray(bits, dtype=int).ravel()
    if b.size % BITS_PER_SYMBOL != 0:
        raise ValueError("bit count must be a multiple of three")
    if not np.all((b == 0) | (b == 1)):
        raise ValueError("bits must be 0 or 1")
    words = (b[0::3] << 2) | (b[1::3] << 1) | b[2::3]
    return _INDEX_FROM_GRAY[words]


def symbols_to_bits(symbols) -> np.ndarray:
    """Inverse of :func:`bits_to_symbols`; returns a flat bit array."""
    s = np.asarray(symbols, dtype=int).ravel()
    if not np.all((s >= 0) & (s < 8)):
        raise ValueError("symbol indices must lie in 0..7")
    words = _GRAY_FROM_INDEX[s]
    bits = np.empty(3 * s.size, dtype=np.int64)
    bits[0::3] = (words >> 2) & 1
    bits[1::3] = (words >> 1) & 1
    bits[2::3] = words & 1
    return bits


def constellation(phase_offset_deg: float = 0.0) -> np.ndarray:
    """The eight ideal unit-magnitude constellation points, index order."""
    phases = np.deg2rad(phase_offset_deg + PSK_STEP_DEG * np.arange(8))
    return np.exp(1j * phases)


# Sync preamble: a fixed maximal-length PN sequence, BPSK inside the 8PSK
# alphabet (chip 0 -> symbol 0, chip 1 -> symbol 4).  The LFSR register
# load below is part of the frame format and must not change.
SYNC_LFSR_TAPS = (6, 5)  # x^6 + x^5 + 1, maximal length 63
SYNC_LFSR_SEED = 0b100101


def pn_chips(length: int, taps=SYNC_LFSR_TAPS, seed: int = SYNC_LFSR_SEED) -> np.ndarray:
    """First ``length`` chips of the LFSR sequence, extended cyclically.

    ``taps`` are the nonzero exponents of the feedback polynomial besides
    the constant term, so (6, 5) realizes a(n+6) = a(n+5) xor a(n).
    """
    degree = max(taps)
    period = 2**degree - 1
    if not 0 < seed < 2**degree:
        raise ValueError("seed must be a nonzero register load")
    state = [(seed >> i) & 1 for i in range(degree)]
    chips = []
    for _ in range(period):
        chips.append(state[0])
        fb = state[0]
        for t in taps:
            if t != degree:
                fb ^= state[t]
        state = state[1:] + [fb]
    reps = -(-length // period)
    return np.tile(np.array(chips, dtype=np.int64), reps)[:length]


def sync_symbols(length: int = 64) -> np.ndarray:
    """Symbol indices of the sync subframe (antipodal pair 0 / 4)."""
    return pn_chips(length) * 4


def pilot_symbols(length: int = 32) -> np.ndarray:
    """Symbol indices of the pilot subframe, cycling all eight points."""
    return np.arange(length, dtype=np.int64) % 8


@dataclass(frozen=True)
class FrameLayout:
    """Symbol counts of the fixed frame: sync, pilot, nine data subframes."""

    sync_len: int = 64
    pilot_len: int = 32
    data_len: int = 256

    def __post_init__(self) -> None:
        if min(self.sync_len, self.pilot_len, self.data_len) < 1:
            raise ValueError("subframe lengths must be positive")

    @property
    def data_symbols(self) -> int:
        return DATA_SUBFRAMES * self.data_len

    @property
    def total_symbols(self) -> int:
        return self.sync_len + self.pilot_len + self.data_symbols

    @property
    def payload_bits(self) -> int:
        return BITS_PER_SYMBOL * self.data_symbols

    @property
    def sync_slice(self) -> slice:
        return slice(0, self.sync_len)

    @property
    def pilot_slice(self) -> slice:
        return slice(self.sync_len, self.sync_len + self.pilot_len)

    @property
    def data_slice(self) -> slice:
        return slice(self.sync_len + self.pilot_len, self.total_symbols)


@dataclass(frozen=True)
class Frame:
    layout: FrameLayout
    symbols: np.ndarray

    def data_symbols(self) -> np.ndarray:
        return self.symbols[self.layout.data_slice]


def build_frame(payload_bits, layout: FrameLayout = FrameLayout()) -> Frame:
    """Assemble sync + pilot + payload into one frame of symbol indices."""
    bits = np.asarray(payload_bits, dtype=int).ravel()
    if bits.size != layout.payload_bits:
        raise ValueError(f"payload must be exactly {layout.payload_bits} bits, got {bits.size}")
    symbols = np.concatenate(
        [sync_symbols(layout.sync_len), pilot_symbols(layout.pilot_len), bits_to_symbols(bits)]
    )
    return Frame(layout, symbols)


def data_rate_bps(symbol_rate_hz: float) -> float:
    """Payload bit rate of the 8PSK link."""
    return BITS_PER_SYMBOL * symbol_rate_hz


@dataclass(frozen=True)
class Waveform:
    """Complex baseband samples plus the metadata needed to process them."""

    samples: np.ndarray
    sample_rate_hz: float
    symbol_rate_hz: float
    mode: TxMode

    def __post_init__(self) -> None:
        ratio = self.sample_rate_hz / self.symbol_rate_hz
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ValueError("sample rate must be an integer multiple of symbol rate")
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex))

    @property
    def oversampling(self) -> int:
        return int(round(self.sample_rate_hz / self.symbol_rate_hz))


def synthesize(
    frame: Frame,
    mode: TxMode,
    curve: VoltagePhaseCurve,
    rc: RcDynamics,
    oversampling: int = 8,
    symbol_rate_hz: float = 2.048e6,
    phase_offset_deg: float = 0.0,
    incident_amplitude: float = 1.0,
) -> Waveform:
    """Render a frame to baseband samples under the selected transmitter.

    ``rc.sample_period_s`` must equal 1 / (symbol_rate * oversampling);
    passing the lag explicitly keeps the control-rate bookkeeping visible
    at the call site.
    """
    if oversampling < 1:
        raise ValueError("oversampling must be >= 1")
    sample_rate = symbol_rate_hz * oversampling
    expected_period = 1.0 / sample_rate
    if abs(rc.sample_period_s - expected_period) > 1e-6 * expected_period:
        raise ValueError("rc.sample_period_s does not match symbol rate and oversampling")

    if mode is TxMode.CONVENTIONAL:
        points = constellation(phase_offset_deg)
        samples = np.repeat(points[frame.symbols], oversampling)
    elif mode is TxMode.METASURFACE:
        volts = bias_voltage_table(curve, phase_offset_deg)
        targets = np.repeat(volts[frame.symbols], oversampling)
        trajectory = voltage_trajectory(rc, targets, v_init=targets[0])
        samples = uniform_reflection(curve, trajectory, incident_amplitude)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Waveform(samples, sample_rate, symbol_rate_hz, mode)


IQ_SIDE_CAR_SUFFIX = ".json"


def write_iq(path, wave: Waveform) -> None:
    """Write interleaved float32 little-endian I/Q plus a JSON sidecar."""
    path = str(path)
    flat = np.empty(2 * wave.samples.size, dtype="<f4")
    flat[0::2] = wave.samples.real
    flat[1::2] = wave.samples.imag
    flat.tofile(path)
    meta = {
        "format": "interleaved float32 little-endian I/Q",
        "sample_rate_hz": wave.sample_rate_hz,
        "symbol_rate_hz": wave.symbol_rate_hz,
        "mode": wave.mode.value,
    }
    with open(path + IQ_SIDE_CAR_SUFFIX, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_iq(path) -> Waveform:
    """Read a waveform written by :func:`write_iq`."""
    path = str(path)
    with open(path + IQ_SIDE_CAR_SUFFIX) as fh:
        meta = json.load(fh)
    flat = np.fromfile(path, dtype="<f4")
    samples = flat[0::2].astype(float) + 1j * flat[1::2].astype(float)
    return Waveform(samples, meta["sample_rate_hz"], meta["symbol_rate_hz"], TxMode(meta["mode"]))
