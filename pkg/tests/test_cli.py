import json
import subprocess
import sys

import pytest

from thetabundle import checks
from thetabundle.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


STD = {"group": {"factors": [2, 2]}, "matrix": [[0, 1], [1, 0]]}


def test_classify_standard_pairing(tmp_path, capsys):
    code, report, _ = run(capsys, "classify-pairing", "--input", write(tmp_path, "e.json", STD))
    assert code == 0
    assert report["blocks"] == [{"n": 2, "d": 1}] and report["index"] == 2
    assert report["radical_order"] == 1


def test_classify_trivial_pairing(tmp_path, capsys):
    doc = {"group": {"factors": [4, 2]}, "matrix": [[0, 0], [0, 0]]}
    code, report, _ = run(capsys, "classify-pairing", "--input", write(tmp_path, "e.json", doc))
    assert code == 0 and report["blocks"] == [] and report["index"] == 1


def test_non_alternating_is_invariant_violation(tmp_path, capsys):
    doc = {"group": {"factors": [3, 3]}, "matrix": [[0, 1], [1, 0]]}
    code, report, err = run(capsys, "classify-pairing", "--input", write(tmp_path, "e.json", doc))
    assert code == 3 and report is None and "NotAlternating" in err


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", json.dumps({"group": {"factors": [2]}})])
def test_malformed_input(tmp_path, capsys, content):
    code, _, err = run(capsys, "classify-pairing", "--input", write(tmp_path, "bad.json", content))
    assert code == 2 and err.startswith("error")


def test_missing_file_and_unknown_command(tmp_path, capsys):
    code, _, _ = run(capsys, "classify-pairing", "--input", str(tmp_path / "nope.json"))
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_output_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["classify-pairing", "--input", write(tmp_path, "e.json", STD), "--output", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    assert json.loads(out.read_text())["index"] == 2


def test_heisenberg_command(tmp_path, capsys):
    code, report, _ = run(capsys, "heisenberg", "--input", write(tmp_path, "k.json", {"factors": [3]}), "--dump")
    assert code == 0
    assert report["dimension"] == 3 and report["irreducible"] and report["homogeneous_index"] == 3
    assert len(report["representation"]) == 9


def test_verify_examples(capsys):
    code, report, _ = run(capsys, "verify", "orbits", "--max-rank", "2")
    assert code == 0 and report["passed"]
    assert report["suites"][0]["summary"]["orbit_sizes"] == {"1": [3, 1], "2": [10, 6]}
    code, report, _ = run(capsys, "verify", "heisenberg", "--max-k", "6")
    assert code == 0 and report["passed"]
    code, report, _ = run(capsys, "verify", "brauer", "--g", "1", "--n", "5")
    assert code == 0 and report["suites"][0]["summary"]["brauer_orders"] == {"g=1,n=5": 1}


def test_verify_failure_exit_code(capsys, monkeypatch):
    def broken(*args, **kwargs):
        res = checks.SuiteResult("obstruction")
        res.expect(False, "forced")
        return res

    monkeypatch.setattr(checks, "obstruction_suite", broken)
    code, report, _ = run(capsys, "verify", "obstruction")
    assert code == 1 and not report["passed"]
    assert report["suites"][0]["counterexample"] == "forced"


def test_brauer_command(tmp_path, capsys):
    code, report, _ = run(capsys, "brauer", "--g", "1", "--n", "4")
    assert code == 0 and report["brauer_group"]["group"] == "trivial"
    model = {"g": 2, "n": 2, "ns": [[[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]]}
    code, report, _ = run(capsys, "brauer", "--input", write(tmp_path, "m.json", model))
    assert report["brauer_group"]["order"] == 32
    assert report["brauer_group"]["invariant_factors"] == [2] * 5
    trivial = {"model": model, "class": [[0] * 4 for _ in range(4)]}
    code, report, _ = run(capsys, "brauer", "--input", write(tmp_path, "c.json", trivial))
    assert code == 0 and report["class"]["is_projectivization"] is True
    plane = {"model": model, "class": [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}
    code, report, _ = run(capsys, "brauer", "--input", write(tmp_path, "p.json", plane))
    assert report["class"]["is_projectivization"] is False
    assert report["class"]["cyclic_blocks"] == [{"n": 2, "d": 1}]
    bad = {"model": model, "class": [[1, 0, 0, 0]] * 4}
    code, _, _ = run(capsys, "brauer", "--input", write(tmp_path, "b.json", bad))
    assert code == 3


def test_selfdual_command(capsys):
    code, report, _ = run(capsys, "selfdual-orbits", "--max-rank", "1")
    assert code == 0
    assert report["orbit_reports"][0]["orbits"] == [{"kind": "symmetric", "size": 3}, {"kind": "alternating", "size": 1}]
    assert report["signs"]["Q.D"]["classified_sign"] == -1


def test_stdin_and_determinism(tmp_path):
    cmd = [sys.executable, "-m", "thetabundle", "classify-pairing", "--input", "-"]
    outs = [subprocess.run(cmd, input=json.dumps(STD), capture_output=True, text=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1] and json.loads(outs[0])["index"] == 2
    args = ["verify", "multiplicativity", "--seed", "3"]
    first = subprocess.run([sys.executable, "-m", "thetabundle", *args], capture_output=True, check=True).stdout
    second = subprocess.run([sys.executable, "-m", "thetabundle", *args], capture_output=True, check=True).stdout
    assert first == second
