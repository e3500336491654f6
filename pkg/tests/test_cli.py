"""Tests for the command-line front end."""

import csv
import io
import json
import math

import pytest

from gaussloop import cli


def _write_config(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


TADPOLE_INI = """
[run]
command = tadpole

[params]
b = 1.0
e = 1.0
"""


def run_cli(args):
    return cli.main(args)


def test_run_csv_output(tmp_path, capsys):
    cfg = _write_config(tmp_path, TADPOLE_INI)
    out = tmp_path / "out.csv"
    code = run_cli(["--config", cfg, "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.startswith("# tool: gaussloop")
    assert "# command: tadpole" in text
    # re-parse the data rows
    data_lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(data_lines))))
    assert len(rows) == 1
    assert float(rows[0]["value_re"]) == pytest.approx(
        1.0 / (4.0 * math.pi**2), rel=1e-3
    )
    assert rows[0]["converged"] == "true"


def test_run_json_output(tmp_path):
    cfg = _write_config(tmp_path, TADPOLE_INI)
    out = tmp_path / "out.json"
    code = run_cli(["--config", cfg, "--format", "json", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["provenance"]["command"] == "tadpole"
    assert payload["rows"][0]["converged"] is True


def test_run_stdout(tmp_path, capsys):
    cfg = _write_config(tmp_path, TADPOLE_INI)
    code = run_cli(["--config", cfg])
    assert code == 0
    captured = capsys.readouterr()
    assert "value_re" in captured.out


def test_reproducible_output(tmp_path):
    cfg = _write_config(tmp_path, TADPOLE_INI)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(["--config", cfg, "--out", str(a)]) == 0
    assert run_cli(["--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep(tmp_path):
    text = TADPOLE_INI.replace("b = 1.0", "b = 1.0\nmode = divergent\nm = 1.0")
    cfg = _write_config(tmp_path, text)
    out = tmp_path / "sweep.csv"
    code = run_cli(
        ["--config", cfg, "--sweep", "k_max", "--seq", "10,20,40", "--out", str(out)]
    )
    assert code == 0
    data_lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(data_lines))))
    assert [float(r["k_max"]) for r in rows] == [10.0, 20.0, 40.0]
    ratio = float(rows[1]["value_re"]) / float(rows[0]["value_re"])
    assert ratio == pytest.approx(4.0, abs=0.15)


def test_missing_config_flag():
    assert run_cli([]) == cli.EXIT_CONFIG


def test_missing_config_file():
    assert run_cli(["--config", "/nonexistent/run.ini"]) == cli.EXIT_CONFIG


def test_empty_config(tmp_path, capsys):
    cfg = _write_config(tmp_path, "")
    assert run_cli(["--config", cfg]) == cli.EXIT_CONFIG
    assert "command" in capsys.readouterr().err


def test_unknown_section(tmp_path):
    cfg = _write_config(tmp_path, TADPOLE_INI + "\n[extras]\nfoo = 1\n")
    assert run_cli(["--config", cfg]) == cli.EXIT_CONFIG


def test_unknown_command(tmp_path):
    cfg = _write_config(tmp_path, "[run]\ncommand = nope\n")
    assert run_cli(["--config", cfg]) == cli.EXIT_CONFIG


def test_unknown_parameter(tmp_path, capsys):
    cfg = _write_config(tmp_path, "[run]\ncommand = tadpole\n\n[params]\nbogus = 1\n")
    assert run_cli(["--config", cfg]) == cli.EXIT_CONFIG
    assert "bogus" in capsys.readouterr().err


def test_out_of_range_parameter(tmp_path):
    cfg = _write_config(tmp_path, "[run]\ncommand = tadpole\n\n[params]\nb = -3\n")
    assert run_cli(["--config", cfg]) == cli.EXIT_CONFIG


def test_sweep_without_seq(tmp_path):
    cfg = _write_config(tmp_path, TADPOLE_INI)
    assert run_cli(["--config", cfg, "--sweep", "b"]) == cli.EXIT_CONFIG
    assert run_cli(["--config", cfg, "--seq", "1,2"]) == cli.EXIT_CONFIG
    assert run_cli(["--config", cfg, "--sweep", "b", "--seq", "x,y"]) == cli.EXIT_CONFIG


def test_io_error(tmp_path):
    cfg = _write_config(tmp_path, TADPOLE_INI)
    code = run_cli(["--config", cfg, "--out", "/nonexistent-dir/out.csv"])
    assert code == cli.EXIT_IO


def test_nonconvergence_exit(tmp_path):
    # an absurdly tight budget forces converged = false rows
    text = TADPOLE_INI + "\n[quadrature]\nabs_tol = 1e-30\nrel_tol = 1e-30\n"
    cfg = _write_config(tmp_path, text)
    code = run_cli(["--config", cfg, "--out", str(tmp_path / "x.csv")])
    assert code == cli.EXIT_NUMERICAL


def test_quadrature_section_validation(tmp_path):
    text = TADPOLE_INI + "\n[quadrature]\nbogus_knob = 1\n"
    cfg = _write_config(tmp_path, text)
    assert run_cli(["--config", cfg]) == cli.EXIT_CONFIG


def test_float_formatting_17_digits():
    buf = io.StringIO()
    payload = {
        "provenance": {"tool": "gaussloop", "version": "x", "command": "c", "params": {}},
        "rows": [{"value_re": 1.0 / 3.0, "converged": True}],
        "summary": {},
    }
    cli.write_csv(buf, payload)
    assert "0.33333333333333331" in buf.getvalue()
