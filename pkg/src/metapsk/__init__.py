"""Baseband simulator for a reflecting-surface 8PSK transmitter.

The package models the two ends of a short radio link: a transmitter
that modulates by re-biasing a reflecting cell grid (plus an ideal
conventional reference), an AWGN channel with explicit link-budget
bookkeeping, and a frame-synchronized measurement receiver.
"""

__version__ = "0.1.0"

from .baseband import TxMode
from .config import SimConfig, load_config, save_config
from .harness import SweepSpec, SweepVar, compare_modes, hardware_counts, run_sweep

__all__ = [
    "SimConfig",
    "SweepSpec",
    "SweepVar",
    "TxMode",
    "compare_modes",
    "hardware_counts",
    "load_config",
    "run_sweep",
    "save_config",
    "__version__",
]
