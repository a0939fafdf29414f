import json

import pytest

from blowupforms.cli import run


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_basis_report_schema(capsys):
    code, report = run_json(capsys, ["basis", "--n", "2", "--k", "1"])
    assert code == 0
    assert report["schema"] == "blowup-report/1"
    assert report["pass"] is True
    assert report["results"]["count"] == 6
    for key in ("command", "inputs", "results", "timing_ms"):
        assert key in report
    entry = report["results"]["entries"][0]
    assert {"flag", "probability", "psi"} <= set(entry)


def test_basis_latex_written(tmp_path, capsys):
    path = tmp_path / "table.tex"
    code, _ = run_json(capsys, ["basis", "--n", "2", "--latex", str(path)])
    assert code == 0
    text = path.read_text()
    assert "\\lambda" in text and "tabular" in text


def test_dof_matrix_assert_identity(capsys):
    code, report = run_json(capsys, ["dof-matrix", "--n", "2", "--assert-identity"])
    assert code == 0
    assert report["results"]["identity_all"] is True


def test_d_check(capsys):
    code, report = run_json(capsys, ["d-check", "--n", "2"])
    assert code == 0
    assert report["results"]["flags_checked"] == 13
    assert report["results"]["failures"] == []


def test_whitney_check(capsys):
    code, report = run_json(capsys, ["whitney-check", "--n", "2"])
    assert code == 0
    assert report["results"]["subsets_checked"] == 7


def test_cohomology_local_flag_spelling(capsys):
    code, report = run_json(capsys, ["cohomology", "--local", "--n", "2"])
    assert code == 0
    assert report["results"]["betti"] == [1, 0, 0]
    assert report["results"]["f_vector"] == [6, 6, 1]


def test_cohomology_global(capsys):
    code, report = run_json(
        capsys, ["cohomology", "global", "--mesh", "torus-7", "--rule", "general"]
    )
    assert code == 0
    res = report["results"]
    assert res["betti_simplicial"] == [1, 2, 1]
    assert res["dd_zero"] is True
    assert res["match"] is True


def test_higher_order(capsys):
    code, report = run_json(capsys, ["higher-order", "--n", "2", "--r", "3"])
    assert code == 0
    res = report["results"]
    assert res["count"] == 19
    assert res["independence_rank"] == 19
    assert res["containment"] is True
    assert res["vanishing_failures"] == []
    assert res["r1_reduction"] is True


def test_mc_verify_small(capsys):
    code, report = run_json(
        capsys,
        ["mc-verify", "--target", "pF", "--n", "1", "--samples", "20000",
         "--rates", "2", "--seed", "7"],
    )
    assert code == 0
    assert report["results"]["cases"] == 6
    assert report["results"]["rng"] == "numpy.random.Philox"


def test_emit_samples(tmp_path, capsys):
    code, report = run_json(capsys, ["emit-samples", "--outdir", str(tmp_path)])
    assert code == 0
    assert len(report["results"]["files"]) >= 7


def test_usage_error_exit_2(capsys):
    assert run(["no-such-command"]) == 2
    capsys.readouterr()


def test_failure_exits_1(capsys):
    code = run(["cohomology", "global", "--mesh", "/nonexistent.json"])
    capsys.readouterr()
    assert code == 1


def test_budget_reports_partial(capsys):
    code, report = run_json(capsys, ["d-check", "--n", "3", "--budget-seconds", "0"])
    assert report["results"]["partial"] is True


def test_basis_eval_grid(capsys):
    code, report = run_json(capsys, ["basis", "--n", "1", "--k", "0", "--eval-grid", "2"])
    assert code == 0
    entry = report["results"]["entries"][0]
    assert "grid" in entry and len(entry["grid"]) == 4


def test_reports_deterministic(capsys):
    _, a = run_json(capsys, ["basis", "--n", "2"])
    _, b = run_json(capsys, ["basis", "--n", "2"])
    a.pop("timing_ms"), b.pop("timing_ms")
    assert a == b
