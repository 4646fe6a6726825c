"""
Tests for the command line front end
"""
import json

import pytest
from click.testing import CliRunner

from errors import InputError
from main import cli, parse_quiver
from quiver_core import Quiver

KRONECKER = {"vertices": ["1", "2"], "arrows": [{"from": "1", "to": "2", "mult": 1}]}


@pytest.fixture
def kron(tmp_path):
    path = tmp_path / "kron.json"
    path.write_text(json.dumps(KRONECKER), encoding="utf-8")
    return str(path)


def run(*args):
    return CliRunner().invoke(cli, list(args))


def test_parse_quiver(tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps({"vertices": ["1", "2"], "arrows": [{"from": "1", "to": "2", "mult": 2}]}))
    assert parse_quiver(path) == Quiver.kronecker(2)


@pytest.mark.parametrize("text, fragment", [
    ('{"vertices": ["1"], "arrows": [{"from": "1", "to": "1", "mult": 1}]}', "loop"),
    ('{"vertices": ["1", "2"], "arrows": [{"from": "1", "to": "2"}]}', "missing 'mult'"),
    ('{"vertices": ["1", "2"], "arrows": [{"from": "1", "to": "3", "mult": 1}]}', "undeclared"),
    ('{"vertices": ["1", "2"], "arrows": [{"from": "1", "to": "2", "mult": 0}]}', "positive integer"),
    ('{"vertices": ["1", "2"], "arrows": [', "malformed JSON at line 1"),
])
def test_parse_quiver_rejects(tmp_path, text, fragment):
    path = tmp_path / "bad.json"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(InputError, match=fragment):
        parse_quiver(path)


def test_kac_json(kron):
    result = run("kac", "--quiver", kron, "--multiply", "3", "--dim", "1,1", "--json")
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert doc["terms"] == [[0, "1"], [1, "1"], [2, "1"]]
    assert doc["root_class"] == "ImaginaryRoot"
    assert doc["kac_theorem_ok"] is True


def test_kac_table(kron):
    result = run("kac", "--quiver", kron, "--dim", "1,1")
    assert result.exit_code == 0
    assert "RealRoot" in result.output


def test_strata_headline(kron):
    result = run("strata", "--quiver", kron, "--multiply", "10", "--dim", "3,2", "--theta", "2,-3", "--json")
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    row = next(r for r in doc["rows"] if r["parts"] == [[2, 1], [1, 1]])
    assert (row["epsilon"], row["threshold"], row["codim_moment"]) == (1, 10, 24)


def test_hn_types(kron):
    result = run("hn-types", "--quiver", kron, "--multiply", "2", "--dim", "2,1", "--theta", "1,-2", "--json")
    assert result.exit_code == 0
    assert json.loads(result.output)["types"] == [[[2, 1]], [[1, 0], [1, 1]], [[2, 0], [0, 1]]]


def test_oracle(kron):
    result = run("oracle", "--quiver", kron, "--multiply", "2", "--dim", "1,1", "--q", "2", "--json")
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert doc["abs_indec_count"] == 3
    assert doc["engine_eval"] == "3"
    assert doc["pass"] is True


def test_decompose_and_verify(kron):
    result = run("decompose", "--quiver", kron, "--multiply", "2", "--dim", "1,1", "--theta", "1,-1", "--json")
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["kac"]["terms"] == [[0, "1"], [1, "1"]]
    assert [b["key"] for b in doc["buckets"]] == ["HN((1,1))", "HN((1,0), (0,1))"]

    result = run("verify-6-7", "--quiver", kron, "--multiply", "2", "--dim", "1,1", "--theta", "1,-1", "--json")
    assert json.loads(result.output)["all_passed"] is True

    result = run("verify-6-8", "--quiver", kron, "--dim", "1,1", "--theta", "1,-1", "--n1", "3", "--n2", "7", "--json")
    assert json.loads(result.output)["passed"] is True


def test_stabilize(kron):
    result = run("stabilize", "--quiver", kron, "--dim", "1,1", "--n-from", "1", "--n-to", "6", "--k", "3", "--json")
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["low_stable_from"] == 4
    assert doc["top_stable_from"] == 4


def test_s0(kron):
    result = run("s0", "--quiver", kron, "--multiply", "3", "--type", "2,1;1,1", "--dim", "3,2", "--json")
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["s0_commutant_dim"] == 1

    result = run("s0", "--quiver", kron, "--type", "2,1;1,1", "--dim", "3,3")
    assert result.exit_code == 2


def test_out_file(kron, tmp_path):
    out = tmp_path / "out.json"
    result = run("kac", "--quiver", kron, "--dim", "1,1", "--json", "--out", str(out))
    assert result.exit_code == 0
    assert json.loads(out.read_text(encoding="utf-8")) == json.loads(result.output)


def test_output_is_deterministic(kron):
    args = ("decompose", "--quiver", kron, "--multiply", "3", "--dim", "2,1", "--theta", "1,-2", "--json")
    assert run(*args).output == run(*args).output


def test_exit_codes(kron, tmp_path):
    bad = tmp_path / "loop.json"
    bad.write_text('{"vertices": ["1"], "arrows": [{"from": "1", "to": "1", "mult": 1}]}')
    assert run("kac", "--quiver", str(bad), "--dim", "1").exit_code == 2
    assert run("hn-types", "--quiver", kron, "--dim", "1,1", "--theta", "1,0").exit_code == 2
    assert run("kac", "--quiver", kron, "--dim", "2,2").exit_code == 2
    assert run("kac", "--quiver", kron, "--dim", "1,x").exit_code == 2
    assert run("oracle", "--quiver", kron, "--multiply", "5", "--dim", "3,3", "--q", "5").exit_code == 3
    assert run("--log-level", "bogus", "kac", "--quiver", kron, "--dim", "1,1").exit_code == 2


def test_error_message(kron):
    result = run("kac", "--quiver", kron, "--dim", "2,2")
    assert "Error" in result.output
    assert "plethystic" in result.output


def test_strata_table_keeps_integer_thresholds(kron):
    result = run("strata", "--quiver", kron, "--multiply", "2", "--dim", "1,1", "--theta", "1,-1")
    assert result.exit_code == 0, result.output
    assert "NaN" not in result.output
    assert "2.0" not in result.output
    split = next(line for line in result.output.splitlines() if "((1,0), (0,1))" in line)
    assert "undefined" in split.split()
    trivial = next(line for line in result.output.splitlines() if line.strip().startswith("((1,1))"))
    assert trivial.split()[1:3] == ["1", "2"]
    assert "root decomposition hypothesis: holds" in result.output

    result = run("strata", "--quiver", kron, "--multiply", "10", "--dim", "3,2", "--theta", "2,-3")
    row = next(line for line in result.output.splitlines() if "((2,1), (1,1))" in line)
    assert "10" in row.split()
    assert "10.0" not in result.output
