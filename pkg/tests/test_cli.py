import json
from importlib import resources

import jsonschema
import pytest

from hoggsearch import cli


def schema(name):
    return json.loads(resources.files("hoggsearch").joinpath(f"schemas/{name}.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_json(capsys):
    code, out, _ = run(capsys, "solve", "--formula", "1,2")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, schema("solve"))
    assert data["decoded_solutions"] == ["11"]
    assert data["probabilities"]["11"] == pytest.approx(1, abs=1e-10)
    assert data["verification"]["passed"] is True


def test_solve_text(capsys):
    code, out, _ = run(capsys, "solve", "--formula", "2", "--format", "text")
    assert code == 0
    assert "solutions: 01 11" in out


def test_solve_exploratory(capsys):
    code, out, _ = run(capsys, "solve", "--formula", "1, -1, 2")
    data = json.loads(out)
    assert code == 0 and data["guaranteed"] is False
    assert data["verification"]["passed"] is None


@pytest.mark.parametrize("argv", [
    ["solve", "--formula", "0"],
    ["solve"],
    ["solve", "--formula", "1", "--bogus"],
    [],
    ["sweep", "--n", "11"],
    ["pulse-check", "--sequence", "R_V2", "--target", "nope"],
    ["pulse-check", "--sequence", "q1/90", "--target", "R_V2"],
    ["tomo", "--formula", "1,2", "--noise", "0.1"],
    ["tomo", "--formula", "1,2,3", "--seed", "1"],
    ["operators", "--n", "2"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_usage_error_message_is_deterministic(capsys):
    first = run(capsys, "solve", "--formula", "0")[2]
    assert first == run(capsys, "solve", "--formula", "0")[2]
    assert first == "hoggsearch solve: error: invalid formula '0': variable index 0 is not allowed\n"


def test_usage_error_leaves_no_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, _, _ = run(capsys, "solve", "--formula", "0", "--output", str(target))
    assert code == 2 and not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "solve", "--formula", "1,2", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["decoded_solutions"] == ["11"]


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "2")
    assert code == 0
    assert out.splitlines()[0] == "8/8 passed"
    code, out, _ = run(capsys, "sweep", "--n", "3", "--format", "json")
    data = json.loads(out)
    jsonschema.validate(data, schema("sweep"))
    assert data["passed"] == data["total"] == 26


def test_pulse_check(capsys):
    code, out, _ = run(capsys, "pulse-check", "--sequence", "R_V1andV2", "--target", "R_V1andV2", "--format", "json")
    data = json.loads(out)
    jsonschema.validate(data, schema("pulse_check"))
    assert code == 0 and data["validating_count"] == 4
    code, out, _ = run(capsys, "pulse-check", "--sequence", "R_V2", "--target", "R_V2")
    assert code == 1 and "0/8 combinations validate" in out
    code, out, _ = run(capsys, "pulse-check", "--sequence", "y1/90 x1/180", "--target", "Hadamard", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "pulse_sign,coupling_sign,label_map,fidelity,validates"
    assert len(out.splitlines()) == 9


def test_tomo(capsys, tmp_path):
    ds = tmp_path / "lines.csv"
    code, out, _ = run(capsys, "tomo", "--formula", "2", "--noise", "0.05", "--seed", "4", "--dataset-csv", str(ds))
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, schema("tomo"))
    assert 0 < data["max_spurious"] <= 0.25
    assert ds.read_text().startswith("setting_id,setting,line_id,line,re,im\n")
    code, out, _ = run(capsys, "tomo", "--formula", "1,2", "--seed", "0", "--format", "csv")
    rows = out.splitlines()
    assert rows[0] == "index,0,1,2,3" and len(rows) == 5


def test_operators(capsys):
    code, out, _ = run(capsys, "operators", "--n", "2", "--m", "1")
    data = json.loads(out)
    jsonschema.validate(data, schema("operators"))
    assert "R" not in data and len(data["U"]) == 4
    code, out, _ = run(capsys, "operators", "--formula", "1,2")
    data = json.loads(out)
    jsonschema.validate(data, schema("operators"))
    assert [z[0] for z in data["R"]] == pytest.approx([-1, 1, 1, 1])
    code, out, _ = run(capsys, "operators", "--n", "2", "--m", "2", "--format", "text")
    assert code == 0 and out.startswith("n=2 m=2")


@pytest.mark.parametrize("argv", [
    ["solve", "--formula", "1, -3, 4"],
    ["tomo", "--formula", "2", "--noise", "0.1", "--seed", "9"],
    ["pulse-check", "--sequence", "Gamma_m1", "--target", "Gamma_m1", "--format", "json"],
])
def test_byte_identical(capsys, argv):
    assert run(capsys, *argv) == run(capsys, *argv)


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "hoggsearch", "sweep", "--n", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("2/2 passed")
