import csv
import json
import math

import numpy as np
import pytest

from lyaplab import OperatorSpec, lyapunov_avg
from lyaplab.cli import main


def read_csv(path):
    with open(path) as f:
        rows = list(csv.reader(f))
    return rows[0], rows[1:]


class TestExitCodes:
    def test_unknown_flag(self, tmp_path, capsys):
        assert main(["lyapunov", "--bogus"]) == 1

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == 1

    def test_missing_required(self, capsys):
        # no lambda anywhere -> config error
        assert main(["lyapunov", "--model", "stdmap", "--energy", "0",
                     "--steps", "10", "--ensemble", "1"]) == 1

    def test_no_output_files_on_usage_error(self, tmp_path):
        out = tmp_path / "x.csv"
        assert main(["lyapunov", "--bogus", "--out", str(out)]) == 1
        assert not out.exists()

    def test_version_exits_zero(self):
        assert main(["--version"]) == 0

    def test_bad_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text("{not json")
        assert main(["lyapunov", "--config", str(cfg)]) == 1

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"frob": 1}))
        assert main(["lyapunov", "--config", str(cfg)]) == 1


class TestLyapunovCommand:
    def run(self, tmp_path, extra=()):
        out = tmp_path / "g.csv"
        rc = main(["lyapunov", "--model", "stdmap", "--lambda", "50",
                   "--energy", "0", "--steps", "20000", "--ensemble", "4",
                   "--seed", "7", "--out", str(out), *extra])
        return rc, out

    def test_csv_columns_and_value(self, tmp_path):
        rc, out = self.run(tmp_path)
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["E", "gamma", "stderr", "steps", "ensemble"]
        assert len(rows) == 1
        est = lyapunov_avg(OperatorSpec.stdmap(50.0), 0.0, 20000, 4, 7)
        assert float(rows[0][1]) == est.gamma
        assert rows[0][3] == "20000" and rows[0][4] == "4"

    def test_summary_echoes_config(self, tmp_path):
        rc, out = self.run(tmp_path)
        doc = json.loads((tmp_path / "g.json").read_text())
        assert doc["subcommand"] == "lyapunov"
        assert doc["seed"] == 7
        assert doc["config"]["lam"] == 50.0
        assert doc["config"]["steps"] == 20000
        assert doc["config"]["ensemble"] == 4      # defaults echoed too
        assert "wall_time_s" in doc and "version" in doc
        assert doc["aggregates"]["gamma_min"] > 0

    def test_rerun_byte_identical(self, tmp_path):
        _, out1 = self.run(tmp_path)
        data1 = out1.read_bytes()
        out1.unlink()
        _, out2 = self.run(tmp_path)
        assert out2.read_bytes() == data1

    def test_workers_flag_no_effect(self, tmp_path):
        _, out1 = self.run(tmp_path)
        data1 = out1.read_bytes()
        out1.unlink()
        _, out2 = self.run(tmp_path, extra=["--workers", "8"])
        assert out2.read_bytes() == data1

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({
            "model": "stdmap", "lam": 50.0, "energy": 0.0,
            "steps": 20000, "ensemble": 4, "seed": 7,
        }))
        out = tmp_path / "h.csv"
        rc = main(["lyapunov", "--config", str(cfg), "--ensemble", "2",
                   "--out", str(out)])
        assert rc == 0
        doc = json.loads((tmp_path / "h.json").read_text())
        assert doc["config"]["ensemble"] == 2      # flag wins
        assert doc["config"]["steps"] == 20000     # file value kept

    def test_energy_grid(self, tmp_path):
        out = tmp_path / "grid.csv"
        rc = main(["lyapunov", "--model", "constant", "--lambda", "10",
                   "--e-min", "0.5", "--e-max", "1.5", "--e-count", "5",
                   "--steps", "1000", "--ensemble", "1", "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        assert [float(r[0]) for r in rows] == [0.5, 0.75, 1.0, 1.25, 1.5]


class TestOtherCommands:
    def test_dos(self, tmp_path):
        out = tmp_path / "d.csv"
        rc = main(["dos", "--model", "iid", "--lambda", "10",
                   "--window", "300", "--ensemble", "2", "--bins", "40",
                   "--seed", "1", "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["bin_lo", "bin_hi", "mass"]
        assert len(rows) == 40
        total = sum(float(r[2]) for r in rows)
        assert total == pytest.approx(1.0, abs=1e-9)
        doc = json.loads((tmp_path / "d.json").read_text())
        assert doc["aggregates"]["total_mass"] == pytest.approx(1.0)

    def test_scan_json_fields(self, tmp_path):
        out = tmp_path / "s.csv"
        rc = main(["scan", "--model", "stdmap", "--lambda", "50",
                   "--e-min", "-0.5", "--e-max", "0.5", "--e-count", "11",
                   "--steps", "5000", "--ensemble", "2",
                   "--threshold-frac", "0.8", "--seed", "1",
                   "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["E", "gamma", "stderr"]
        assert len(rows) == 11
        agg = json.loads((tmp_path / "s.json").read_text())["aggregates"]
        assert agg["threshold"] == pytest.approx(0.8 * math.log(50.0))
        assert {"meas_Zt", "fraction_below"} <= set(agg)

    def test_thouless(self, tmp_path):
        out = tmp_path / "t.csv"
        rc = main(["thouless", "--model", "iid", "--lambda", "10",
                   "--e-min", "0.3", "--e-max", "0.7", "--e-count", "3",
                   "--steps", "5000", "--lyap-ensemble", "2",
                   "--dos-window", "400", "--dos-ensemble", "4",
                   "--bins", "200", "--seed", "2", "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["E", "gamma_transfer", "gamma_thouless", "residual"]
        assert len(rows) == 3
        for r in rows:
            assert abs(float(r[3])) < 0.5

    def test_bounds(self, tmp_path):
        out = tmp_path / "b.csv"
        rc = main(["bounds", "--model", "iid", "--lambda", "1000",
                   "--t-frac", "0.5", "--xi", "0.01", "--delta", "0.001",
                   "--g", "0.002", "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert "clamped_bound" in header and len(rows) == 1
        doc = json.loads((tmp_path / "b.json").read_text())
        assert doc["aggregates"]["vacuous"] is False

    def test_bounds_default_delta_stdmap(self, tmp_path):
        rc = main(["bounds", "--model", "stdmap", "--lambda", "30",
                   "--xi", "0.01", "--g", "0.01", "--seed", "0",
                   "--out", str(tmp_path / "b.csv")])
        assert rc == 0
        doc = json.loads((tmp_path / "b.json").read_text())
        assert doc["aggregates"]["delta"] == pytest.approx(30.0 ** -2)

    def test_resonance_classification(self, tmp_path):
        out = tmp_path / "r.csv"
        lams = f"{20 * math.pi},{21 * math.pi},{20 * math.pi + 1}"
        rc = main(["resonance", "--lambdas", lams, "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["lambda", "lambda_bar", "resonant"]
        assert [r[2] for r in rows] == ["true", "true", "false"]

    def test_resonance_with_k_diverging_exits_2(self, tmp_path):
        rc = main(["resonance", "--lambdas", str(20 * math.pi),
                   "--with-k", "--alpha", "0.9", "--k-tol", "0.05",
                   "--out", str(tmp_path / "r.csv")])
        assert rc == 2

    def test_orbit(self, tmp_path):
        out = tmp_path / "o.csv"
        rc = main(["orbit", "--model", "stdmap", "--lambda", "30",
                   "--steps", "5", "--init", "0,1", "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["n", "x"]
        assert len(rows) == 7    # x_{-1} .. x_5
        assert float(rows[0][1]) == 0.0 and float(rows[1][1]) == 1.0

    def test_orbit_rejects_static_model(self, tmp_path):
        rc = main(["orbit", "--model", "constant", "--lambda", "1",
                   "--steps", "5", "--out", str(tmp_path / "o.csv")])
        assert rc == 1
