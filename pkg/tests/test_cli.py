import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_symmetric
from squeezeflow.bogoliubov import write_matrix
from squeezeflow.cli import main, resolve_config, build_parser


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


def report(text):
    return {row["key"]: row["value"] for row in table(text)}


class TestSimulate:
    def test_ungapped(self, capsys):
        code, out, _ = run(capsys, "simulate", "--n-max", "4")
        assert code == 0
        rep = report(out)
        assert abs(float(rep["tanh_r"]) - 1 / math.sqrt(2)) <= 5e-3
        assert float(rep["p_1"]) == 0
        assert rep["config.t_start"] == "%.15e" % -40.0

    def test_adiabatic(self, capsys):
        # The finite-horizon mismatch with the instantaneous ground state decays
        # like 1/(4 alpha T^2), so a long horizon is needed to reach 1e-6.
        code, out, _ = run(capsys, "simulate", "--g", "3", "--t-start", "-250", "--t-end", "250")
        rep = report(out)
        assert code == 0
        assert float(rep["tanh_r"]) < 1e-6 and float(rep["fidelity"]) > 1 - 1e-6

    def test_gapped_closed_form(self, capsys):
        code, out, _ = run(capsys, "simulate", "--g", "1", "--t-start", "-60", "--t-end", "60",
                           "--format", "json")
        rep = json.loads(out)
        assert code == 0
        assert abs(rep["tanh_r"] - (1 + math.exp(math.pi)) ** -0.5) <= 5e-3
        assert rep["abs_error_tanh_r"] >= 0

    def test_csv_format(self, capsys):
        _, out, _ = run(capsys, "simulate", "--t-start", "-5", "--t-end", "5")
        assert out.startswith("key,value\n") and "\r" not in out
        assert "%.15e" % 5.0 in out

    def test_byte_identical(self, tmp_path):
        outs = []
        for k in range(2):
            path = tmp_path / f"run{k}.csv"
            assert main(["simulate", "--t-start", "-10", "--t-end", "10", "--out", str(path)]) == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_timing_is_opt_in(self, capsys):
        _, out, _ = run(capsys, "simulate", "--t-start", "-3", "--t-end", "3", "--timing")
        assert "wall_time_s" in out
        _, out, _ = run(capsys, "simulate", "--t-start", "-3", "--t-end", "3")
        assert "wall_time_s" not in out


class TestConfig:
    def test_precedence(self, tmp_path, monkeypatch):
        monkeypatch.delenv("SQUEEZEFLOW_JOBS", raising=False)
        cfg_file = tmp_path / "c.json"
        cfg_file.write_text(json.dumps({"alpha": 2.0, "g": 0.5, "n_max": 3}))
        args = build_parser().parse_args(["simulate", "--config", str(cfg_file), "--g", "0.7"])
        cfg = resolve_config(args)
        assert cfg["alpha"] == 2.0 and cfg["g"] == 0.7 and cfg["n_max"] == 3
        assert cfg["tol"] == 1e-10

    def test_env_jobs(self, monkeypatch):
        monkeypatch.setenv("SQUEEZEFLOW_JOBS", "3")
        cfg = resolve_config(build_parser().parse_args(["lz-compare"]))
        assert cfg["jobs"] == 3
        cfg = resolve_config(build_parser().parse_args(["lz-compare", "--jobs", "1"]))
        assert cfg["jobs"] == 1

    @pytest.mark.parametrize("argv", [
        ["simulate", "--tol", "0.1"],
        ["simulate", "--alpha", "-1"],
        ["simulate", "--t-start", "5", "--t-end", "1"],
        ["simulate", "--n-max", "-2"],
        ["lz-compare", "--delta-sq", "-1"],
        ["simulate", "--bogus"],
    ])
    def test_config_errors(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 3 and err

    def test_bad_config_file(self, tmp_path, capsys):
        path = tmp_path / "c.json"
        path.write_text('{"unknown": 1}')
        assert run(capsys, "simulate", "--config", str(path))[0] == 3
        path.write_text("not json")
        assert run(capsys, "simulate", "--config", str(path))[0] == 3
        assert run(capsys, "simulate", "--config", str(tmp_path / "missing.json"))[0] == 3

    def test_io_error(self, tmp_path, capsys):
        code, _, err = run(capsys, "simulate", "--t-end", "1", "--t-start", "-1",
                           "--out", str(tmp_path / "no" / "such" / "file.csv"))
        assert code == 4 and "I/O" in err

    def test_integration_failure(self, capsys, monkeypatch):
        import squeezeflow.cli as cli
        from squeezeflow.flow import IntegrationError

        def fail(*args, **kwargs):
            raise IntegrationError("step size underflow", 1.5)

        monkeypatch.setattr(cli, "propagator", fail)
        code, _, err = run(capsys, "simulate")
        assert code == 2 and "1.5" in err

    def test_geometry_residual_failure(self, tmp_path, capsys):
        path = tmp_path / "z.txt"
        with open(path, "w") as fh:
            write_matrix(fh, np.diag([0.9999, 0.2]))
        code, out, _ = run(capsys, "geometry-check", "--z-file", str(path))
        assert code == 2 and float(table(out)[0]["fd_residual"]) > 1e-6


class TestTables:
    def test_trajectory(self, capsys):
        code, out, _ = run(capsys, "trajectory", "--grid", "61")
        rows = table(out)
        assert code == 0 and len(rows) == 61
        assert float(rows[0]["re_z"]) == 0 and float(rows[0]["im_z"]) == 0
        moduli = [float(r["tanh_r"]) for r in rows]
        assert float(rows[int(np.argmax(moduli))]["t"]) == 0
        w = complex(float(rows[-1]["re_w"]), float(rows[-1]["im_w"]))
        assert abs(w + 1j / math.sqrt(2)) <= 5e-2

    def test_spectrum_fan(self, capsys):
        _, out, _ = run(capsys, "spectrum-fan", "--t-start", "0", "--t-end", "2", "--grid", "2",
                        "--n-levels", "2")
        rows = {(float(r["t"]), int(r["n"])): float(r["E_n"]) for r in table(out)}
        assert rows[(0.0, 0)] == 0 and rows[(0.0, 1)] == 0
        assert rows[(2.0, 0)] == 1
        _, out, _ = run(capsys, "spectrum-fan", "--g", "3", "--t-start", "0", "--t-end", "1",
                        "--grid", "2", "--n-levels", "2")
        assert {(float(r["t"]), int(r["n"])): float(r["E_n"]) for r in table(out)}[(0.0, 1)] == 4.5

    def test_lz_compare_parallel_sorted(self, capsys):
        code, out, _ = run(capsys, "lz-compare", "--delta-sq", "3,0,1", "--jobs", "3",
                           "--t-start", "-40", "--t-end", "40")
        rows = table(out)
        assert code == 0
        assert [float(r["delta_sq"]) for r in rows] == [0.0, 1.0, 3.0]
        assert float(rows[0]["measured_1mp0"]) == pytest.approx(1 - 1 / math.sqrt(2), abs=5e-3)
        assert 0.9 <= float(rows[2]["ratio_to_asymptote"]) <= 1.1
        assert float(rows[2]["lz_formula"]) == pytest.approx(math.exp(-1.5 * math.pi))
        _, serial, _ = run(capsys, "lz-compare", "--delta-sq", "0,1,3", "--jobs", "1",
                           "--t-start", "-40", "--t-end", "40")
        assert serial == out

    def test_geometry_check(self, capsys):
        code, out, _ = run(capsys, "geometry-check", "--points", "10", "--format", "json")
        rows = json.loads(out)
        assert code == 0 and len(rows) == 10
        assert max(r["fd_residual"] for r in rows) <= 1e-6

    def test_geometry_z_file(self, tmp_path, capsys, rng):
        path = tmp_path / "z.txt"
        with open(path, "w") as fh:
            for n in (1, 2, 3):
                write_matrix(fh, random_symmetric(rng, n, 0.5))
        code, out, _ = run(capsys, "geometry-check", "--z-file", str(path))
        assert code == 0 and [int(r["n_modes"]) for r in table(out)] == [1, 2, 3]
        path.write_text("2\n1,0\n")
        assert run(capsys, "geometry-check", "--z-file", str(path))[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "squeezeflow", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for name in ("simulate", "trajectory", "spectrum-fan", "lz-compare", "geometry-check"):
        assert name in proc.stdout
