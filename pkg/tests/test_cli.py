import json

import pytest

from grassq.cli import load_problem, main
from grassq.errors import ProblemFormatError
from grassq.suites import emit_report, run_suite


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_load_problem_symbolic(tmp_path):
    path = write(tmp_path, "p.json", {"n": 3, "rho": ["2", "3"]})
    problem = load_problem(path)
    assert problem.n == 3
    assert [str(r) for r in problem.rho] == ["2", "3"]
    assert problem.H is None


def test_load_problem_with_matrix(tmp_path):
    path = write(tmp_path, "p.json", {
        "n": 2, "rho": ["2"],
        "H": [[[1, 0], [4, 0]], [[1, 0], [1, 0]]]})
    problem = load_problem(path)
    assert problem.H is not None
    assert problem.H[0][1] == 4 + 0j


def test_load_problem_rejects_bad_input(tmp_path):
    with pytest.raises(ProblemFormatError):
        load_problem(write(tmp_path, "a.json", {"n": 1}))
    with pytest.raises(ProblemFormatError):
        load_problem(write(tmp_path, "b.json", {"n": 2, "rho": ["-2"]}))
    with pytest.raises(ProblemFormatError):
        load_problem(write(tmp_path, "c.json", {"n": 2, "rho": ["2", "3"]}))
    with pytest.raises(ProblemFormatError):
        load_problem(write(tmp_path, "d.json", {"n": 2, "rho": [2]}))
    with pytest.raises(ProblemFormatError):
        load_problem(write(tmp_path, "e.json",
                           {"n": 2, "rho": ["2"], "H": [[1, 2], [3, 4]]}))
    bad = tmp_path / "f.json"
    bad.write_text("{not json")
    with pytest.raises(ProblemFormatError):
        load_problem(str(bad))


def test_exit_codes(tmp_path, capsys):
    assert main(["verify", "coherent", "--n", "2..3"]) == 0
    capsys.readouterr()
    # range above the cap is a usage error
    assert main(["verify", "all", "--n", "7..9"]) == 2
    capsys.readouterr()
    # unknown selector is rejected by the parser
    assert main(["verify", "nonsense"]) == 2
    capsys.readouterr()
    assert main(["verify", "coherent", "--n", "x..y"]) == 2
    capsys.readouterr()
    # missing input file is an IO error
    assert main(["verify", "biortho", "--input",
                 str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_problem_driven_biortho(tmp_path, capsys):
    path = write(tmp_path, "p.json", {
        "n": 2, "rho": ["2"],
        "H": [[[1, 0], [4, 0]], [[1, 0], [1, 0]]]})
    assert main(["verify", "biortho", "--input", path]) == 0
    out = capsys.readouterr().out
    assert "biortho/pseudo-hermiticity" in out


def test_exit_code_one_on_failing_check(tmp_path, capsys):
    # a barely non-Hermitian matrix: eigenvectors nearly orthonormal, so
    # the same-family integral sits close to I and the gap check fails
    path = write(tmp_path, "edge.json", {
        "n": 2, "rho": ["2"],
        "H": [[[1, 0], [1e-6, 0]], [[0, 0], [2, 0]]]})
    assert main(["verify", "biortho", "--input", path]) == 1
    out = capsys.readouterr().out
    assert "fail" in out
    assert "same-family-gap" in out


def test_json_report_shape_and_determinism(capsys):
    assert main(["verify", "suq2", "--format", "json"]) == 0
    first = capsys.readouterr().out
    assert main(["verify", "suq2", "--format", "json"]) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert set(payload) == {"checks"}
    for check in payload["checks"]:
        assert set(check) == {"id", "ref", "status", "defect", "runtime_ms"}
        assert check["status"] in ("pass", "fail", "reported-discrepancy")
        assert check["runtime_ms"] is None
    ids = [c["id"] for c in payload["checks"]]
    assert ids == sorted(ids)


def test_text_report_mentions_identities(capsys):
    assert main(["verify", "coherent", "--n", "2..2"]) == 0
    out = capsys.readouterr().out
    assert "b|theta> = theta |theta>" in out
    assert "pass" in out


def test_discrepancies_do_not_fail_the_run(capsys):
    code = main(["verify", "suq2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "reported-discrepancy" in out
    # the canonical defect appears verbatim in the report
    assert "th thb |psi_0><phi_0|" in out


def test_timings_flag(capsys):
    assert main(["verify", "coherent", "--n", "2..2", "--timings"]) == 0
    out = capsys.readouterr().out
    assert " ms)" in out


def test_run_suite_rejects_unknown_selector():
    from grassq.errors import EngineError
    with pytest.raises(EngineError):
        run_suite("everything")


def test_emit_report_empty():
    from grassq.suites import SuiteReport
    assert json.loads(emit_report(SuiteReport(), "json")) == {"checks": []}
