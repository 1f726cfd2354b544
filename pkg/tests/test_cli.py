import json

import pytest

from protoquipper.cli import main


@pytest.fixture
def src(tmp_path):
    def write(text):
        p = tmp_path / "t.pq"
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def test_check_identity(src, capsys):
    assert main(["check", src("(fun (x) x)"), "--type", "(arrow qubit qubit)"]) == 0
    assert "lambda1l" in capsys.readouterr().out


def test_check_duplication_fails_after_complete_search(src, capsys):
    code = main(["check", src("(fun (x) (prod x x))"), "--type",
                 "(arrow qubit (tensor qubit qubit))"])
    assert code == 1
    assert "search completed" in capsys.readouterr().out


def test_check_reports_depth_exhaustion(src, capsys):
    code = main(["check", src("(fun (x) x)"), "--type", "(arrow qubit qubit)", "--depth", "2"])
    assert code == 1
    assert "no proof within depth 2" in capsys.readouterr().out


def test_check_true_json(src, capsys):
    assert main(["check", src("true"), "--type", "(bang bool)", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "proved" and data["rules"] == ["bc:truei"]


def test_check_with_free_variables(src):
    assert main(["check", src("(prod f f)"), "--type", "(tensor bool bool)",
                 "--free", "f:(bang bool)"]) == 0
    assert main(["check", src("(prod f f)"), "--type", "(tensor qubit qubit)",
                 "--free", "f:qubit"]) == 1


def test_trace_prints_derivation(src, capsys):
    assert main(["trace", src("true"), "--type", "(bang bool)"]) == 0
    assert "|-" in capsys.readouterr().out


def test_eval_with_trace_and_circuit(src, capsys):
    code = main(["eval", src("(app (app unbox (box (qubit) (fun (x) x))) (qvar 0))"),
                 "--trace", "--dump-circuit"])
    out = capsys.readouterr().out
    assert code == 0 and "unboxr" in out and out.startswith("value")


def test_eval_fuel(src, capsys):
    assert main(["eval", src("(app (fun (x) x) true)"), "--fuel", "0"]) == 1
    assert "fuel exhausted" in capsys.readouterr().out


def test_parse_and_usage_errors(src, capsys):
    assert main(["check", src("(fun (x) x"), "--type", "qubit"]) == 2
    assert main(["check", src("x"), "--type", "(arrow qubit"]) == 2
    assert main(["check", src("x")]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["eval", src("true"), "--fuel", "-1"]) == 2
    assert main(["check", "/nonexistent/file", "--type", "qubit"]) == 2


def test_meta_json(capsys):
    assert main(["meta", "--suite", "sl-metatheory", "--cases", "10", "--format", "json"]) == 0
    [rep] = json.loads(capsys.readouterr().out)
    assert rep["suite"] == "sl-metatheory" and rep["cases"] == 10 and rep["failures"] == []


def test_docs(capsys):
    assert main(["docs"]) == 0
    out = capsys.readouterr().out
    assert "lambda1l" in out and "unboxr" in out
