import json

import pytest

from sunitsolve.cli import main


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_json(capsys):
    code, out, _ = _run(capsys, ["solve", "--field", "-2,0,1", "--s-primes", "2", "--json"])
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 17 and doc["schema_version"] == "1.0"
    assert doc["bound_report"]["B_final"] >= 1
    assert "provenance" in doc and doc["provenance"]["seeds"]["box_hash"]


def test_summary_output(capsys):
    code, out, _ = _run(capsys, ["solve", "--field", "-2,1", "--s-primes", "2,3"])
    assert code == 0 and "11 unordered solutions" in out


def test_sieve_needs_bound(capsys):
    code, _, err = _run(capsys, ["sieve-below-bound", "--field", "-2,0,1", "--s-primes", "2"])
    assert code == 2 and "bound" in err


def test_sieve_below_bound(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = _run(capsys, ["sieve-below-bound", "--field", "-3,0,1", "--s-primes", "2", "--bound", "20", "-o", str(out)])
    doc = json.loads(out.read_text())
    assert code == 0 and doc["count"] == 8 and doc["provenance"]["sieve"]["sieve_primes"]


def test_bound_command(capsys):
    code, out, _ = _run(capsys, ["bound", "--field", "-2,0,1", "--s-primes", "2", "--json"])
    rep = json.loads(out)["bound_report"]
    assert code == 0 and rep["B1"] >= rep["B2"] and rep["R"] >= 1


def test_generators_command(capsys):
    code, out, _ = _run(capsys, ["generators", "--field", "-2,0,1", "--s-primes", "2", "--json"])
    g = json.loads(out)["generators"]
    assert code == 0 and g["w"] == 2 and g["t"] == 2


def test_job_file(capsys, tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"field": [-2, 1], "s_primes": [2], "mode": "solve"}))
    code, out, _ = _run(capsys, ["run", str(job), "--json"])
    assert code == 0 and json.loads(out)["count"] == 2


def test_ramanujan_nagell_command(capsys):
    code, out, _ = _run(capsys, ["ramanujan-nagell", "--q", "11", "--json"])
    assert code == 0 and json.loads(out)["solutions"] == [[11, 2, 1, 1]]


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--field", "1,0,2", "--s-primes", "2"],
        ["solve", "--field", "-1,0,1", "--s-primes", "2"],
        ["solve", "--field", "-2,0,1", "--s-primes", "4"],
        ["solve", "--field", "1,0,-1,0,1", "--s-primes", "2,3"],
        ["solve", "--job", "/nonexistent.json"],
        ["frobnicate"],
        [],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, _, _ = _run(capsys, argv)
    assert code == 2


def test_mathematical_failure_exit_1(capsys):
    code, _, err = _run(capsys, ["fermat-check", "--field", "1,0,1"])
    assert code == 1 and "HypothesisNotMet" in err
