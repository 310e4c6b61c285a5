"""Command line front end: sweeps, mode comparison, hardware counts, IQ dumps.

Every subcommand prints a JSON summary on stdout and writes any bulk data
to files, so runs are easy to script.  Failures exit nonzero with a
single JSON error line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .baseband import TxMode, build_frame, synthesize
from .channel import ChannelConfig, realized_snr_db, apply_channel
from .config import SimConfig, load_config
from .harness import (
    SWEEP_MANIFEST_NAME,
    SWEEP_RESULTS_NAME,
    SweepSpec,
    SweepVar,
    compare_modes,
    default_values,
    derive_seed,
    hardware_counts,
    read_results_csv,
    run_sweep,
    write_manifest,
    write_results_csv,
)
from .receiver import measure, receive_frame


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(json.dumps({"error": message}), file=sys.stderr)
        raise SystemExit(2)


def _config(args) -> SimConfig:
    return load_config(args.config) if args.config else SimConfig()


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_sweep(args) -> int:
    cfg = _config(args)
    var = SweepVar(args.var)
    values = tuple(args.values) if args.values else default_values(var, cfg)
    spec = SweepSpec(
        var=var,
        values=values,
        modes=tuple(TxMode(m) for m in args.modes),
        trials=args.trials if args.trials is not None else cfg.trials,
        master_seed=args.seed,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = run_sweep(spec, cfg)
    results_path = out / SWEEP_RESULTS_NAME
    manifest_path = out / SWEEP_MANIFEST_NAME
    write_results_csv(results_path, results)
    write_manifest(manifest_path, spec, cfg)
    _emit({
        "results": str(results_path),
        "manifest": str(manifest_path),
        "rows": len(results),
        "low_confidence_rows": sum(r.low_confidence for r in results),
    })
    return 0


def cmd_compare(args) -> int:
    rows = []
    for path in args.results:
        rows.extend(read_results_csv(path))
    gaps = compare_modes(rows, targets=tuple(args.targets))
    _emit({"gaps": [asdict(g) for g in gaps]})
    return 0


def cmd_hw_count(args) -> int:
    _emit({
        "channels": args.channels,
        "metasurface": asdict(hardware_counts(args.channels, TxMode.METASURFACE)),
        "conventional": asdict(hardware_counts(args.channels, TxMode.CONVENTIONAL)),
    })
    return 0


def cmd_constellation(args) -> int:
    cfg = _config(args)
    mode = TxMode(args.mode)
    layout = cfg.layout()

    rng = np.random.default_rng(derive_seed(args.seed, "payload"))
    payload = rng.integers(0, 2, size=layout.payload_bits)
    frame = build_frame(payload, layout)
    wave = synthesize(
        frame, mode, cfg.curve(), cfg.rc(),
        oversampling=cfg.oversampling, symbol_rate_hz=cfg.symbol_rate_hz,
        phase_offset_deg=cfg.phase_offset_deg, incident_amplitude=cfg.incident_amplitude,
    )
    common = dict(seed=derive_seed(args.seed, "noise"), link_loss_db=cfg.link_loss_db,
                  noise_floor_dbm=cfg.noise_floor_dbm, budget=cfg.budget())
    if args.power is not None:
        channel = ChannelConfig(tx_power_dbm=args.power, **common)
    else:
        channel = ChannelConfig(snr_db=args.snr, **common)

    rx = apply_channel(wave, channel)
    received = receive_frame(rx, layout, cfg.sync_threshold, cfg.phase_offset_deg)
    metrics = measure(received, payload, frame.data_symbols(), cfg.phase_offset_deg)

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "q"])
        for z in received.eq_data:
            writer.writerow([repr(float(z.real)), repr(float(z.imag))])

    _emit({
        "mode": mode.value,
        "snr_db": realized_snr_db(channel, mode),
        "tx_power_dbm": args.power,
        "ber": metrics.ber,
        "ser": metrics.ser,
        "evm_rms_pct": metrics.evm_rms_pct,
        "est_snr_db": metrics.est_snr_db,
        "points": int(received.eq_data.size),
        "out": str(args.out),
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="metapsk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    modes = [m.value for m in TxMode]

    p = sub.add_parser("sweep", help="run a seeded sweep and write results.csv + manifest.json")
    p.add_argument("--var", choices=[v.value for v in SweepVar], required=True)
    p.add_argument("--values", type=float, nargs="+",
                   help="sweep grid; defaults to the config grid for --var")
    p.add_argument("--modes", nargs="+", choices=modes, default=modes)
    p.add_argument("--trials", type=int, help="frame budget per point")
    p.add_argument("--seed", type=int, default=271828)
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="dB gap between mode BER curves from result CSVs")
    p.add_argument("results", nargs="+", help="results.csv files covering both modes")
    p.add_argument("--targets", type=float, nargs="+", default=[1e-2, 3e-3, 1e-3])
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("hw-count", help="RF component counts for both architectures")
    p.add_argument("--channels", type=int, default=256)
    p.set_defaults(func=cmd_hw_count)

    p = sub.add_parser("constellation", help="single-frame run emitting equalized IQ points")
    p.add_argument("--mode", choices=modes, default=TxMode.METASURFACE.value)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--snr", type=float, default=15.0, help="fixed per-sample SNR, dB")
    group.add_argument("--power", type=float, help="transmit power, dBm (uses the link budget)")
    p.add_argument("--seed", type=int, default=271828)
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--out", default="constellation.csv", help="IQ output CSV")
    p.set_defaults(func=cmd_constellation)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
