import json

import pytest

from reunion.cli import main, parse_grid, UsageError


def run(tmp_path, *argv):
    return main(list(argv) + ["--out", str(tmp_path)])


def test_grid_parsing():
    assert len(parse_grid("--grid", "0.5:10:0.5")) == 20
    assert parse_grid("--grid", "1,2.5") == [1.0, 2.5]
    with pytest.raises(UsageError):
        parse_grid("--grid", "1:0:0.5")


def test_reunion_writes_csv_and_manifest(tmp_path):
    assert run(tmp_path, "reunion", "--model", "absorbing", "--n", "2", "--grid", "0.5:10:0.5") == 0
    lines = (tmp_path / "reunion_absorbing_N2.csv").read_text().splitlines()
    assert lines[0] == "L,value,error_estimate,method"
    assert len(lines) == 21
    manifest = json.loads((tmp_path / "manifest_reunion.json").read_text())
    assert manifest["command"] == "reunion"
    assert set(manifest) >= {"parameters", "tool_version", "wall_time", "outputs"}


def test_reunion_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(d, "reunion", "--model", "periodic", "--n", "3", "--length", "2.0") == 0
    assert (a / "reunion_periodic_N3.csv").read_bytes() == (b / "reunion_periodic_N3.csv").read_bytes()


def test_digits_env(tmp_path, monkeypatch):
    monkeypatch.setenv("REUNION_DIGITS", "40")
    assert run(tmp_path, "reunion", "--model", "absorbing", "--n", "2", "--length", "1") == 0
    manifest = json.loads((tmp_path / "manifest_reunion.json").read_text())
    assert manifest["parameters"]["digits"] == 40
    monkeypatch.setenv("REUNION_DIGITS", "abc")
    assert run(tmp_path, "reunion", "--model", "absorbing", "--n", "2", "--length", "1") == 2


@pytest.mark.parametrize("argv,flag", [
    (["reunion", "--model", "absorbing", "--n", "0", "--length", "1"], "--n"),
    (["reunion", "--model", "torus", "--n", "2", "--length", "1"], "--model"),
    (["reunion", "--model", "absorbing", "--n", "2", "--length", "-1"], "--length"),
    (["tw", "--beta", "3"], "--beta"),
    (["ldf", "--points", "1"], "--points"),
    (["scalecheck", "--model", "reflecting"], "--model"),
    (["oracle", "--model", "absorbing", "--n", "3", "--sites", "2"], "--sites"),
    (["mc", "--seed", "1", "--samples", "10"], "--samples"),
])
def test_usage_errors_exit_2(tmp_path, capsys, argv, flag):
    assert run(tmp_path, *argv) == 2
    assert flag in capsys.readouterr().err


def test_argparse_errors_exit_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "reunion", "--n", "2")
    assert exc.value.code == 2


def test_precision_failure_exits_3(tmp_path):
    assert run(tmp_path, "reunion", "--model", "absorbing", "--n", "12", "--length", "0.5",
               "--digits", "15") == 3


def test_ldf(tmp_path):
    assert run(tmp_path, "ldf", "--min", "5", "--max", "30", "--points", "6") == 0
    rows = (tmp_path / "ldf.csv").read_text().splitlines()
    assert rows[0] == "A,F_minus,F_plus,delta" and len(rows) == 7


def test_oracle_row(tmp_path):
    assert run(tmp_path, "oracle", "--model", "absorbing", "--n", "1", "--sites", "20") == 0
    header, row = (tmp_path / "oracle_absorbing_N1.csv").read_text().splitlines()
    assert header.startswith("model,N,L,sites,steps")
    assert abs(float(row.split(",")[8])) < 0.02


def test_tw(tmp_path):
    assert run(tmp_path, "tw", "--beta", "2") == 0
    rows = (tmp_path / "tw_beta2.csv").read_text().splitlines()
    assert rows[0] == "t,cdf,pdf"
