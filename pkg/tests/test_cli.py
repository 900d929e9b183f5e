import json
import subprocess
import sys

import pytest

from ringflux.cli import main
from ringflux.reporting import read_csv, read_json


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_console_script_wired():
    proc = subprocess.run([sys.executable, "-m", "ringflux.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "simulate" in proc.stdout


def test_omega_txt_lists_members(tmp_path, capsys):
    out = tmp_path / "omega.txt"
    code, stdout, _ = run_cli(
        ["omega", "--L", "10", "--m1", "6", "--m110", "2",
         "--format", "txt", "--out", str(out)], capsys)
    assert code == 0
    assert str(out) in stdout
    text = out.read_text()
    assert "set 0: 8 classes" in text
    assert "set 1: 5 classes" in text
    assert "0101101011" in text
    assert "transient: none" in text


def test_sector_csv_schema_and_rows(tmp_path, capsys):
    out = tmp_path / "sector.csv"
    code, _, _ = run_cli(
        ["sector", "--L", "10", "--m1", "6", "--m110", "2",
         "--out", str(out)], capsys)
    assert code == 0
    assert out.read_text().startswith("# schema-version: 1\n")
    columns, rows = read_csv(out)
    assert columns == ["config", "orbit_size", "m1110", "m010"]
    assert len(rows) == 13
    assert sum(int(row[1]) for row in rows) == 120


def test_matrix_json_round_trip(tmp_path, capsys):
    out = tmp_path / "matrix.json"
    code, _, _ = run_cli(
        ["matrix", "--L", "10", "--m1", "6", "--m110", "2",
         "--omega-id", "1", "--format", "json", "--out", str(out)], capsys)
    assert code == 0
    payload = read_json(out)
    assert payload["schema_version"] == 1
    assert payload["members"] == [
        "0011001111", "0011010111", "0011100111", "0011101011", "0101101011",
    ]
    assert payload["entries"][4] == ["0", "0", "1", "0", "0"]
    assert payload["entries"][2][1] == "2*alpha*(1-alpha)"


def test_stationary_csv_values(tmp_path, capsys):
    out = tmp_path / "stat.csv"
    code, stdout, _ = run_cli(
        ["stationary", "--L", "10", "--m1", "6", "--m110", "2",
         "--omega-id", "0", "--alpha", "0.5", "--out", str(out)], capsys)
    assert code == 0
    columns, rows = read_csv(out)
    assert columns == ["config", "alpha", "probability", "product_form",
                       "rel_error"]
    assert len(rows) == 8
    total = sum(float(row[2]) for row in rows)
    assert total == pytest.approx(1.0, abs=1e-12)
    assert all(float(row[4]) <= 1e-10 for row in rows)


def test_verify_conjecture_csv(tmp_path, capsys):
    out = tmp_path / "verify.csv"
    code, stdout, _ = run_cli(
        ["verify-conjecture", "--L", "10", "--m1", "6", "--m110", "2",
         "--alphas", "0.25,0.75", "--out", str(out)], capsys)
    assert code == 0
    assert "PASS" in stdout
    columns, rows = read_csv(out)
    assert columns == ["set_id", "alpha", "classes", "max_rel_error", "tol",
                       "passed"]
    # two sets, two alpha values each
    assert len(rows) == 4
    assert {row[5] for row in rows} == {"true"}


def test_partition_formats_agree(tmp_path, capsys):
    csv_out = tmp_path / "table.csv"
    json_out = tmp_path / "table.json"
    run_cli(["partition", "--L", "10", "--m1", "6", "--m110", "2",
             "--out", str(csv_out)], capsys)
    run_cli(["partition", "--L", "10", "--m1", "6", "--m110", "2",
             "--format", "json", "--out", str(json_out)], capsys)
    columns, rows = read_csv(csv_out)
    assert columns == ["k1", "k2", "count"]
    from_csv = {(int(r[0]), int(r[1])): int(r[2]) for r in rows}
    payload = read_json(json_out)
    from_json = {(c["k1"], c["k2"]): int(c["count"])
                 for c in payload["counts"]}
    assert from_csv == from_json == {(1, 0): 30, (2, 0): 15, (1, 1): 60,
                                     (0, 2): 15}
    assert payload["kmax"] == 2


def test_partition_omega_scope(tmp_path, capsys):
    out = tmp_path / "omega_table.csv"
    code, _, _ = run_cli(
        ["partition", "--L", "10", "--m1", "6", "--m110", "2",
         "--scope", "omega", "--omega-id", "1", "--out", str(out)], capsys)
    assert code == 0
    _, rows = read_csv(out)
    total = sum(int(r[2]) for r in rows)
    assert total == 40


def test_flux_theory_columns(tmp_path, capsys):
    out = tmp_path / "flux.csv"
    code, _, _ = run_cli(
        ["flux-theory", "--L", "20", "--m110", "2", "--alpha", "0.7",
         "--out", str(out)], capsys)
    assert code == 0
    columns, rows = read_csv(out)
    assert columns == ["L", "m1", "m110", "alpha", "Q_v", "Q_u"]
    assert all(row[0] == "20" and row[2] == "2" for row in rows)
    m1_values = [int(row[1]) for row in rows]
    assert m1_values == sorted(m1_values)
    for row in rows:
        assert float(row[4]) + float(row[5]) == pytest.approx(int(row[1]) / 20)


def test_diagram_columns_and_determinism(tmp_path, capsys):
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    base = ["diagram", "--L", "15", "--alpha", "0.5", "--rule", "stoch-u",
            "--steps", "60", "--replicates", "3", "--seed", "9"]
    assert run_cli(base + ["--out", str(out_a)], capsys)[0] == 0
    assert run_cli(base + ["--out", str(out_b)], capsys)[0] == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    columns, rows = read_csv(out_a)
    assert columns == ["L", "m1", "m110", "alpha", "rho1", "rho110",
                       "Q_u_hat", "stderr", "n_max", "n_burn", "replicates",
                       "seed"]
    empty = [row for row in rows if row[6] == ""]
    assert empty, "grid points with empty sectors appear as warning rows"


def test_simulate_json_and_plot(tmp_path, capsys):
    out = tmp_path / "run.json"
    code, _, _ = run_cli(
        ["simulate", "--L", "20", "--m1", "9", "--m110", "2",
         "--rule", "stoch-v", "--alpha", "0.6", "--steps", "25",
         "--seed", "4", "--format", "json", "--out", str(out), "--plot"],
        capsys)
    assert code == 0
    payload = read_json(out)
    assert len(payload["configs"]) == 26
    assert len(payload["moves"]) == 25
    assert (tmp_path / "run.png").exists()


def test_limit_check_json(tmp_path, capsys):
    out = tmp_path / "limit.json"
    code, _, _ = run_cli(
        ["limit-check", "--L", "10", "--m1", "6", "--m110", "2",
         "--format", "json", "--out", str(out)], capsys)
    assert code == 0
    payload = read_json(out)
    assert payload["exact_limit_gap"] == "2/5"
    assert [row["alpha"] for row in payload["rows"]] == [0.9, 0.99, 0.999,
                                                         0.9999]


def test_out_dir_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RINGFLUX_OUT_DIR", str(tmp_path))
    code, stdout, _ = run_cli(
        ["partition", "--L", "10", "--m1", "6", "--m110", "2"], capsys)
    assert code == 0
    assert (tmp_path / "partition_sector_L10_m6_b2.csv").exists()


def test_exit_codes(tmp_path, capsys):
    # infeasible sector
    code, _, err = run_cli(
        ["partition", "--L", "10", "--m1", "9", "--m110", "4",
         "--out", str(tmp_path / "x.csv")], capsys)
    assert code == 4
    assert err.startswith("error: infeasible-sector:")
    # enumeration bound
    code, _, err = run_cli(
        ["omega", "--L", "30", "--m1", "6", "--m110", "2",
         "--out", str(tmp_path / "y.csv")], capsys)
    assert code == 2
    assert err.startswith("error: invalid-argument:")
    # missing sector arguments
    code, _, err = run_cli(
        ["sector", "--L", "10", "--out", str(tmp_path / "z.csv")], capsys)
    assert code == 2
    # unwritable output directory
    code, _, err = run_cli(
        ["partition", "--L", "10", "--m1", "6", "--m110", "2",
         "--out", str(tmp_path / "missing" / "t.csv")], capsys)
    assert code == 3
    assert err.startswith("error: io:")


def test_usage_error_from_argparse():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--L", "not-an-int"])
    assert exc.value.code == 2


def test_artifacts_do_not_leak_partial_files(tmp_path, capsys):
    # a failing run must not leave the target file behind
    target = tmp_path / "nothing.csv"
    code, _, _ = run_cli(
        ["partition", "--L", "10", "--m1", "9", "--m110", "4",
         "--out", str(target)], capsys)
    assert code == 4
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []
