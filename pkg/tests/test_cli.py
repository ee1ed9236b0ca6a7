import json
import subprocess
import sys

import pytest

from lcp_forge.cli import main
from lcp_forge.cli.main import execute, _parser
from lcp_forge.cli.runners import CASE_NAMES


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)
    return _write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_matrix_passes_on_hyperbolic_block(write, capsys):
    path = write("m.json", {"matrix": [[1, 2, 0, 0], [2, 3, 0, 0], [0, 0, 1, 2], [0, 0, 2, 3]]})
    code, out, _ = run(["check-matrix", "--input", path, "--json"], capsys)
    report = json.loads(out)
    assert code == 0 and report["overall"] == "PASS"
    names = [c["name"] for c in report["checks"]]
    assert names[:3] == ["semisimple", "block_decompose", "modulus_classes"]
    assert report["input_digest"].startswith("sha256:")


def test_check_matrix_fails_on_jordan_block(write, capsys):
    path = write("j.json", {"matrix": [[1, 1], [0, 1]]})
    code, out, _ = run(["check-matrix", "--input", path], capsys)
    assert code == 1
    assert out.splitlines()[-1] == "overall: FAIL"
    assert "FAIL semisimple" in out


def test_expectations_are_checked(write, capsys, case):
    data = case("a0-eigen")
    code, _, _ = run(["check-matrix", "--input", write("a.json", data)], capsys)
    assert code == 0
    data["expect"]["lambda"] = "(3 - sqrt5)/2 + 1"
    code, out, _ = run(["check-matrix", "--input", write("b.json", data)], capsys)
    assert code == 1 and "FAIL expect/lambda" in out


@pytest.mark.parametrize("name, code", [("counterexample32", 0), ("withorbifold", 0), ("notsemidirect", 0)])
def test_check_group_on_cases(write, capsys, case, name, code):
    data = case(name)
    rc, out, _ = run(["check-group", "--input", write(f"{name}.json", data), "--json"], capsys)
    report = json.loads(out)
    assert rc == code, [c for c in report["checks"] if c["verdict"] == "FAIL"]
    split = next(c for c in report["checks"] if c["name"] == "splitting_obstruction")
    assert split["verdict"] == "ECHO" and not split["mandatory"]


def test_broken_relation_fails_group_check(write, capsys, case):
    data = case("counterexample32")
    data["group"]["relations"][1]["equals"] = {"translation": ["0", "3", "0", "0"]}
    code, out, _ = run(["check-group", "--input", write("bad.json", data)], capsys)
    assert code == 1 and "FAIL" in out


def test_metric_tolerance_override(write, capsys, case):
    path = write("c.json", case("counterexample32"))
    assert run(["metric", "--input", path], capsys)[0] == 0
    code, out, _ = run(["metric", "--input", path, "--tolerance", "1e-30"], capsys)
    assert code == 1 and "FAIL equivariance/T_A" in out


def test_seed_changes_samples_but_not_verdicts(write, capsys, case):
    path = write("c.json", case("counterexample32"))
    a = json.loads(run(["metric", "--input", path, "--json", "--seed", "1"], capsys)[1])
    b = json.loads(run(["metric", "--input", path, "--json", "--seed", "2"], capsys)[1])
    assert a["overall"] == b["overall"] == "PASS"


@pytest.mark.parametrize("argv", [
    [],
    ["check-matrix"],
    ["frobnicate"],
    ["reproduce-paper", "--case", "nosuchcase"],
    ["reproduce-paper", "--tolerance", "-1"],
    ["reproduce-paper", "--tolerance", "abc"],
    ["check-matrix", "--input", "/nonexistent/file.json"],
])
def test_invalid_invocations_exit_2(argv, capsys):
    assert main(argv) == 2


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", json.dumps({"matrix": [[1, 2]]}),
                                     json.dumps({"nomatrix": 1}), json.dumps({"matrix": [["x"]]})])
def test_malformed_matrix_inputs_exit_2(write, capsys, content):
    assert main(["check-matrix", "--input", write("bad.json", content)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_malformed_group_input_exits_2(write, capsys):
    assert main(["check-group", "--input", write("g.json", {"group": {"p": 2}})]) == 2


def test_reports_are_deterministic():
    args = _parser().parse_args(["reproduce-paper", "--case", "counterexample32"])
    first = execute(args).dumps(timings=False)
    second = execute(args).dumps(timings=False)
    assert first == second
    assert "wall_time" not in first


def test_reproduce_runs_every_case(capsys):
    code, out, _ = run(["reproduce-paper", "--json"], capsys)
    report = json.loads(out)
    assert code == 0 and report["overall"] == "PASS"
    assert report["schema_version"] == 1
    prefixes = {c["name"].split("/")[0] for c in report["checks"]}
    assert set(CASE_NAMES) <= prefixes


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lcp_forge.cli", "reproduce-paper", "--case", "notsemidirect"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert res.stdout.strip().endswith("overall: PASS")
