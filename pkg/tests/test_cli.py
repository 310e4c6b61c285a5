"""End-to-end checks of the command line front end."""

import csv
import json

import pytest

from metapsk.baseband import TxMode
from metapsk.cli import main
from metapsk.harness import write_results_csv

from helpers import loglinear_curve


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def stdout_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestHwCount:
    def test_reference_aperture(self, capsys):
        report = stdout_json(capsys, "hw-count", "--channels", "256")
        assert report["metasurface"] == {"power_amplifiers": 1, "mixers": 0, "filters": 0}
        assert report["conventional"] == {"power_amplifiers": 256, "mixers": 512, "filters": 512}

    def test_invalid_channels_fail_with_json_error(self, capsys):
        code, _, err = run_cli(capsys, "hw-count", "--channels", "0")
        assert code == 1
        assert "error" in json.loads(err)


class TestSweep:
    def test_writes_results_and_manifest(self, capsys, tmp_path):
        report = stdout_json(
            capsys, "sweep", "--var", "snr", "--values", "4", "8",
            "--trials", "2", "--seed", "5", "--out", str(tmp_path),
        )
        assert report["rows"] == 4  # 2 values x 2 modes
        results = tmp_path / "results.csv"
        manifest = tmp_path / "manifest.json"
        assert results.exists() and manifest.exists()
        with open(results, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 4
        assert {r["mode"] for r in rows} == {"metasurface", "conventional"}
        assert json.loads(manifest.read_text())["sweep"]["master_seed"] == 5

    def test_rerun_reproduces_bytes(self, capsys, tmp_path):
        argv = ("sweep", "--var", "snr", "--values", "6", "--modes", "conventional",
                "--trials", "2", "--seed", "9")
        a, b = tmp_path / "a", tmp_path / "b"
        assert main([*argv, "--out", str(a)]) == 0
        assert main([*argv, "--out", str(b)]) == 0
        capsys.readouterr()
        assert (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()

    def test_decreasing_values_rejected(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "sweep", "--var", "snr", "--values", "8", "4",
                               "--trials", "1", "--out", str(tmp_path))
        assert code == 1
        assert "increasing" in json.loads(err)["error"]

    def test_missing_var_is_a_usage_error(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--out", str(tmp_path)])
        assert exc.value.code == 2
        assert "error" in json.loads(capsys.readouterr().err)

    def test_unknown_config_key_reported(self, capsys, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("bogus = 1\n")
        code, _, err = run_cli(capsys, "sweep", "--var", "snr", "--values", "6",
                               "--trials", "1", "--config", str(bad), "--out", str(tmp_path))
        assert code == 1
        assert "unknown key" in json.loads(err)["error"]


class TestCompare:
    def test_recovers_synthetic_shift(self, capsys, tmp_path):
        grid = (0.0, 4.0, 8.0, 12.0, 16.0, 20.0)
        ms = tmp_path / "ms.csv"
        conv = tmp_path / "conv.csv"
        write_results_csv(ms, loglinear_curve(TxMode.METASURFACE, 6.0, values=grid))
        write_results_csv(conv, loglinear_curve(TxMode.CONVENTIONAL, 0.0, values=grid))
        report = stdout_json(capsys, "compare", str(ms), str(conv), "--targets", "1e-2", "1e-3")
        assert [g["target_ber"] for g in report["gaps"]] == [1e-2, 1e-3]
        for gap in report["gaps"]:
            assert gap["gap_db"] == pytest.approx(6.0, abs=1e-9)

    def test_single_mode_input_fails(self, capsys, tmp_path):
        ms = tmp_path / "ms.csv"
        write_results_csv(ms, loglinear_curve(TxMode.METASURFACE, 0.0))
        code, _, err = run_cli(capsys, "compare", str(ms))
        assert code == 1
        assert "both modes" in json.loads(err)["error"]


class TestConstellation:
    def test_emits_iq_table_and_metrics(self, capsys, tmp_path):
        out = tmp_path / "iq.csv"
        report = stdout_json(capsys, "constellation", "--mode", "conventional",
                             "--snr", "20", "--seed", "3", "--out", str(out))
        assert report["points"] == 2304
        assert report["ber"] == 0.0
        assert report["snr_db"] == 20.0
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2304
        radii = [abs(complex(float(r["i"]), float(r["q"]))) for r in rows[:50]]
        assert all(0.5 < radius < 1.5 for radius in radii)

    def test_power_mode_uses_link_budget(self, capsys, tmp_path):
        out = tmp_path / "iq.csv"
        report = stdout_json(capsys, "constellation", "--mode", "metasurface",
                             "--power", "-30", "--seed", "3", "--out", str(out))
        assert report["snr_db"] == pytest.approx(9.0)  # -30 - 50 - 6 + 95
        assert report["tx_power_dbm"] == -30.0

    def test_same_seed_same_bytes(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ("constellation", "--mode", "metasurface", "--snr", "12", "--seed", "7")
        assert main([*argv, "--out", str(a)]) == 0
        assert main([*argv, "--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_snr_and_power_are_exclusive(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["constellation", "--snr", "10", "--power", "-30",
                  "--out", str(tmp_path / "iq.csv")])
        assert exc.value.code == 2
        assert "error" in json.loads(capsys.readouterr().err)
