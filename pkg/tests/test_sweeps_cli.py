import json
import subprocess
import sys

import numpy as np
import pytest

from eqtrap import cli, sweeps


def run_cli(argv):
    return cli.main(argv)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


def test_figure1_csv_schema_and_values(tmp_path):
    out = tmp_path / "fig1.csv"
    code = run_cli(["figure1", "--beta-omega", "0.01", "--delta-min", "0",
                    "--delta-max", "2", "--steps", "3", "--out", str(out)])
    assert code == 0
    header, rows = read_csv(out)
    assert header == list(sweeps.FIGURE1_FIELDS)
    assert len(rows) == 3
    first = rows[0]
    assert float(first["delta_over_omega"]) == 0.0
    expected = 0.25 * (1.0 - np.exp(-0.01))
    assert float(first["trap_measure"]) == pytest.approx(expected, abs=1e-10)
    assert float(first["eq_bound_rhs"]) == pytest.approx(0.050, abs=0.002)
    for row in rows:
        assert float(row["trap_measure"]) <= float(row["bound_total"]) + 1e-9
        assert row["converged"] == "true"


def test_figure1_multiple_temperatures(tmp_path):
    out = tmp_path / "fig1.csv"
    code = run_cli(["figure1", "--beta-omega", "0.003,0.005,0.01",
                    "--steps", "2", "--delta-max", "1", "--out", str(out)])
    assert code == 0
    _, rows = read_csv(out)
    assert len(rows) == 6
    temps = sorted({row["beta_omega"] for row in rows})
    assert temps == ["0.003", "0.005", "0.01"]


def test_figure1_rejects_bad_ranges(tmp_path, capsys):
    assert run_cli(["figure1", "--steps", "0"]) == 2
    assert run_cli(["figure1", "--delta-min", "3", "--delta-max", "1"]) == 2
    assert run_cli(["figure1", "--beta-omega", ""]) == 2
    capsys.readouterr()


def test_model_flag_mismatch_is_config_error(capsys):
    assert run_cli(["figure1", "--model", "two-band", "--steps", "2"]) == 2
    capsys.readouterr()


def test_figure2_bound_dominates(tmp_path):
    out = tmp_path / "fig2.csv"
    code = run_cli(["figure2", "--beta-omega", "0.01", "--steps", "8",
                    "--delta-max", "8", "--out", str(out)])
    assert code == 0
    header, rows = read_csv(out)
    assert header == list(sweeps.FIGURE2_FIELDS)
    for row in rows:
        assert float(row["bound_total"]) >= float(row["trap_measure"])
    assert float(rows[0]["bound_total"]) > 0.0


def test_figure2_g0_no_trapping(tmp_path):
    out = tmp_path / "fig2.csv"
    code = run_cli(["figure2", "--g", "0", "--steps", "4", "--delta-max", "3",
                    "--n-max", "30", "--out", str(out)])
    assert code == 0
    _, rows = read_csv(out)
    for row in rows:
        assert float(row["trap_measure"]) == 0.0


def test_two_band_csv(tmp_path):
    out = tmp_path / "band.csv"
    code = run_cli(["two-band", "--n1", "100", "--n2", "100", "--steps", "10",
                    "--out", str(out)])
    assert code == 0
    header, rows = read_csv(out)
    assert header == list(sweeps.TWO_BAND_FIELDS)
    for row in rows:
        assert float(row["trap_measure"]) == pytest.approx(0.25, abs=1e-12)
        assert float(row["trap_measure_inf"]) == pytest.approx(0.5, abs=1e-12)
        assert float(row["rate_decay"]) >= 0.0
        assert float(row["rate_dephasing"]) >= 0.0


def test_random_bound_rows(tmp_path):
    out = tmp_path / "mc.csv"
    code = run_cli(["random-bound", "--trials", "3", "--samples", "200",
                    "--d-b", "12", "--seed", "3", "--out", str(out)])
    assert code == 0
    _, rows = read_csv(out)
    assert len(rows) == 3
    for row in rows:
        assert row["satisfied"] == "true"
        assert float(row["mc_average_distance"]) <= float(row["eq_bound_rhs"])


def test_json_format_mirrors_csv(tmp_path):
    csv_path = tmp_path / "rows.csv"
    json_path = tmp_path / "rows.json"
    base = ["figure1", "--beta-omega", "0.01", "--steps", "3",
            "--delta-max", "2"]
    assert run_cli(base + ["--out", str(csv_path)]) == 0
    assert run_cli(base + ["--format", "json", "--out", str(json_path)]) == 0
    header, csv_rows = read_csv(csv_path)
    records = json.loads(json_path.read_text())
    assert len(records) == len(csv_rows)
    for rec, row in zip(records, csv_rows):
        assert list(rec.keys()) == header
        assert rec["maximizer"] == row["maximizer"]
        assert rec["converged"] is True
        assert f"{rec['trap_measure']:.12g}" == row["trap_measure"]


def test_figure1_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    argv = ["figure1", "--steps", "6", "--delta-max", "5", "--seed", "7"]
    assert run_cli(argv + ["--out", str(out1)]) == 0
    assert run_cli(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_console_entry_point(tmp_path):
    out = tmp_path / "fig.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "eqtrap.cli", "figure1", "--steps", "2",
         "--delta-max", "1", "--beta-omega", "0.01", "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert out.exists()


def test_validate_exit_code():
    assert run_cli(["validate"]) == 0


def test_format_value_significant_digits():
    assert sweeps.format_value(0.1234567890123456) == "0.123456789012"
    assert sweeps.format_value(True) == "true"
    assert sweeps.format_value(False) == "false"
    assert sweeps.format_value(3) == "3"
    assert sweeps.format_value("basis:1") == "basis:1"
