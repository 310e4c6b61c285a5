"""AWGN channel with fixed-SNR and link-budget noise scaling.

SNR is defined per complex sample: mean received signal power over noise
variance.  Two ways to set it:

* fixed SNR: the waveform passes through at unit gain and the noise
  variance is scaled to the measured signal power;
* power budget: the waveform is scaled to an absolute received power
  (transmit power minus link loss, dBm) and the noise sits at a fixed
  floor.

Surface-mode waveforms are charged an extra loss in power-budget mode:
the cells return only part of the incident power, and reflection
modulation spends carrier power that a dedicated amplifier chain would
deliver to the antenna.  Both terms live in :class:`LossBudget`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .baseband import BITS_PER_SYMBOL, TxMode, Waveform

# Loss from the 85 % power reflectivity of the cells.
REFLECTIVITY_LOSS_DB = 10.0 * math.log10(1.0 / 0.85)


@dataclass(frozen=True)
class LossBudget:
    """Extra path loss charged to the reflection-modulated transmitter.

    The default excess term is calibrated so the total is 6.0 dB.
    """

    reflectivity_loss_db: float = REFLECTIVITY_LOSS_DB
    modulation_excess_loss_db: float = 6.0 - REFLECTIVITY_LOSS_DB

    def __post_init__(self) -> None:
        if self.reflectivity_loss_db < 0 or self.modulation_excess_loss_db < 0:
            raise ValueError("loss terms must be non-negative")

    @property
    def total_db(self) -> float:
        return self.reflectivity_loss_db + self.modulation_excess_loss_db


@dataclass(frozen=True)
class ChannelConfig:
    """Either ``snr_db`` (fixed SNR) or ``tx_power_dbm`` (power budget)."""

    seed: int
    snr_db: float | None = None
    tx_power_dbm: float | None = None
    link_loss_db: float = 50.0
    noise_floor_dbm: float = -95.0
    budget: LossBudget = LossBudget()

    def __post_init__(self) -> None:
        if (self.snr_db is None) == (self.tx_power_dbm is None):
            raise ValueError("set exactly one of snr_db and tx_power_dbm")


def fixed_snr(snr_db: float, seed: int) -> ChannelConfig:
    return ChannelConfig(seed=seed, snr_db=snr_db)


def power_budget(tx_power_dbm: float, seed: int, link_loss_db: float = 50.0,
                 noise_floor_dbm: float = -95.0, budget: LossBudget = LossBudget()) -> ChannelConfig:
    return ChannelConfig(seed=seed, tx_power_dbm=tx_power_dbm, link_loss_db=link_loss_db,
                         noise_floor_dbm=noise_floor_dbm, budget=budget)


def realized_snr_db(cfg: ChannelConfig, mode: TxMode) -> float:
    """Per-sample SNR the channel will realize for a waveform of ``mode``."""
    if cfg.snr_db is not None:
        return cfg.snr_db
    loss = cfg.link_loss_db
    if mode is TxMode.METASURFACE:
        loss += cfg.budget.total_db
    return cfg.tx_power_dbm - loss - cfg.noise_floor_dbm


def apply_channel(wave: Waveform, cfg: ChannelConfig) -> Waveform:
    """Scale the waveform per the channel config and add complex AWGN.

    Noise is circularly symmetric and seeded: the same config on the same
    waveform reproduces the output exactly.
    """
    x = wave.samples
    p_in = float(np.mean(np.abs(x) ** 2))
    if p_in == 0.0:
        raise ValueError("input waveform has zero power")

    snr_db = realized_snr_db(cfg, wave.mode)
    if cfg.snr_db is not None:
        if math.isinf(snr_db) and snr_db > 0:
            return replace(wave, samples=x.copy())
        gain = 1.0
        noise_power = p_in / 10.0 ** (snr_db / 10.0)
    else:
        loss = cfg.link_loss_db + (cfg.budget.total_db if wave.mode is TxMode.METASURFACE else 0.0)
        p_rx = 10.0 ** ((cfg.tx_power_dbm - loss) / 10.0)
        gain = math.sqrt(p_rx / p_in)
        noise_power = 10.0 ** (cfg.noise_floor_dbm / 10.0)

    rng = np.random.default_rng(cfg.seed)
    scale = math.sqrt(noise_power / 2.0)
    noise = scale * (rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size))
    return replace(wave, samples=gain * x + noise)


def snr_per_bit_db(snr_db: float, oversampling: int) -> float:
    """Convert per-sample SNR to Eb/N0 for rectangular pulses.

    Valid when the receiver collects the whole symbol energy; the
    oversampling term is the symbol-integration gain.
    """
    if oversampling < 1:
        raise ValueError("oversampling must be >= 1")
    return snr_db + 10.0 * math.log10(oversampling) - 10.0 * math.log10(BITS_PER_SYMBOL)


def snr_from_eb_n0_db(eb_n0_db: float, oversampling: int) -> float:
    """Per-sample SNR that realizes a target Eb/N0; inverse of snr_per_bit_db."""
    if oversampling < 1:
        raise ValueError("oversampling must be >= 1")
    return eb_n0_db - 10.0 * math.log10(oversampling) + 10.0 * math.log10(BITS_PER_SYMBOL)
