"""Command-line surface: exit codes, output formats, determinism."""

import json

import pytest

from coulomb2e import cli, solve


def run(argv):
    return cli.main(argv)


def test_usage_errors():
    assert run(["ion", "--terms", "99"]) == cli.EXIT_USAGE
    assert run(["no-such-command"]) == cli.EXIT_USAGE
    assert run([]) == cli.EXIT_USAGE


def test_help_exits_zero():
    assert run(["--help"]) == 0


def test_validate_filter_and_empty(capsys):
    assert run(["validate", "--filter", "f3*"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "PASS" in out and "f3_base" in out
    assert run(["validate", "--filter", "zzz*"]) == cli.EXIT_USAGE


def test_ion_json_schema(tmp_path, capsys):
    out = tmp_path / "ion.json"
    code = run(["ion", "--z", "2", "--spin", "triplet", "--terms", "1",
                "--out", str(out)])
    assert code == cli.EXIT_OK
    payload = json.loads(out.read_text())
    res = payload["result"]
    for key in ("energy", "params", "virial_ratio", "threshold", "margin",
                "stable", "meta"):
        assert key in res
    assert payload["metadata"]["version"]
    assert res["stable"] is True
    assert res["energy"] == pytest.approx(-2.1615, abs=1e-3)


def test_json_round_trips_byte_identical(tmp_path):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["ion", "--z", "1", "--terms", "1", "--seed", "3"]
    assert run(argv + ["--out", str(f1)]) == cli.EXIT_OK
    assert run(argv + ["--out", str(f2)]) == cli.EXIT_OK
    text = f1.read_text()
    assert text == f2.read_text()
    # parse -> re-emit is byte identical
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n" == text


def test_scan_frozen_csv(tmp_path):
    out = tmp_path / "frozen.csv"
    assert run(["scan", "frozen", "--z", "1", "--format", "csv",
                "--out", str(out)]) == cli.EXIT_OK
    lines = out.read_text().splitlines()
    meta = [l for l in lines if l.startswith("#")]
    assert any("minimum" in l for l in meta)
    header = next(l for l in lines if not l.startswith("#"))
    assert header == "b,energy"


def test_scan_frozen_json(capsys):
    assert run(["scan", "frozen", "--z", "1"]) == cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["rows"][0].keys() == {"b", "energy"}


def test_scan_charge_perturbative(capsys):
    assert run(["scan", "charge", "--basis", "perturbative",
                "--format", "csv"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    row = [l for l in out.splitlines() if l.startswith("perturbative")][0]
    assert float(row.split(",")[1]) == pytest.approx(1.2498, abs=1e-3)


def test_molecule_ps2(capsys):
    assert run(["molecule", "--mode", "ps2"]) == cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out.split("# wall_time")[0])
    assert payload["result"]["energy"] == pytest.approx(-0.504233, abs=1e-5)
    assert payload["result"]["stable"] is True


def test_molecule_bad_masses(capsys):
    assert run(["molecule", "--masses", "1,2,3"]) == cli.EXIT_USAGE


def test_nonconvergence_exit_code(monkeypatch):
    def boom(*a, **k):
        raise solve.NonConvergenceError("forced")

    monkeypatch.setattr(solve, "optimize_ion", boom)
    assert run(["ion", "--z", "1", "--terms", "1"]) == cli.EXIT_NOCONV


def test_tables_tolerance_failure_exit(monkeypatch, capsys):
    # corrupt one closed-form reference value: the miss must surface as exit 4
    bad = [("a=b=Z c=0", -0.999, -2.75, None, None)]
    monkeypatch.setattr(cli, "_TABLE2", bad)
    assert run(["tables", "--table", "2"]) == cli.EXIT_TOL


def test_tables_fast_rows(capsys):
    # closed-form rows only: cheap end-to-end check of the report format
    assert run(["tables", "--table", "2", "--rows", "a=b=Z",
                "--format", "csv"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "a=b=Z c=0,H-,-0.375" in out


def test_sig6_rounding():
    assert cli._sig6(0.123456789) == 0.123457
    assert cli._sig6({"x": [1.23456789e-7, True]}) == {"x": [1.23457e-07, True]}
    assert cli._sig6(float("nan")) is None


def test_parse_ratios():
    assert cli._parse_ratios("1,2.5,inf") == [1.0, 2.5, float("inf")]
    with pytest.raises(ValueError):
        cli._parse_ratios("abc")
