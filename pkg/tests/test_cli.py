import json
from importlib import resources

import pytest
from click.testing import CliRunner

from symrank.cli import main

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

needs_jsonschema = pytest.mark.skipif(jsonschema is None,
                                      reason="jsonschema not installed")


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


def load_schema():
    with resources.files("symrank.schemas").joinpath("report.schema.json").open() as fh:
        return json.load(fh)


def check_schema(payload):
    if jsonschema is not None:
        jsonschema.validate(payload, load_schema())


# -- bound ---------------------------------------------------------------------


def test_bound_prints_value(runner):
    res = runner.invoke(main, ["bound", "--q", "3", "--n", "6", "--d", "4"])
    assert res.exit_code == 0
    assert res.output.strip() == "531441"


def test_bound_writes_report(runner, tmp_path):
    out = tmp_path / "bound.json"
    res = runner.invoke(main, ["bound", "--q", "3", "--n", "6", "--d", "6",
                               "--out", str(out)])
    assert res.exit_code == 0
    payload = json.loads(out.read_text())
    assert payload["bound"] == "729"
    check_schema(payload)


def test_bound_rejects_bad_d(runner):
    res = runner.invoke(main, ["bound", "--q", "3", "--n", "6", "--d", "9"])
    assert res.exit_code == 2


# -- verify --------------------------------------------------------------------


def test_verify_sample_pass(runner, tmp_path):
    out = tmp_path / "rep.json"
    res = runner.invoke(main, [
        "verify", "--family", "T", "--p", "3", "--m", "1", "--n", "6",
        "--s", "1", "--eta", "primitive", "--mode", "sample",
        "--count", "3000", "--seed", "42", "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert payload["verdict"] == "pass"
    assert payload["report"]["min_rank"] >= 4
    assert payload["report"]["spec"]["claim_status"] == "proved"
    check_schema(payload)


def test_verify_usage_errors(runner):
    res = runner.invoke(main, ["verify", "--family", "T", "--p", "3",
                               "--n", "6", "--s", "2", "--eta", "primitive"])
    assert res.exit_code == 2
    res = runner.invoke(main, ["verify", "--family", "T", "--p", "3",
                               "--n", "6", "--s", "1", "--eta", "primitive^2"])
    assert res.exit_code == 2
    res = runner.invoke(main, ["verify", "--family", "S", "--p", "3",
                               "--n", "6", "--s", "1"])  # missing --d
    assert res.exit_code == 2


def test_verify_budget_needs_force(runner):
    # 3^16 codewords exceed the default budget only with a tiny budget; the
    # CLI surfaces BudgetError as a usage error, suggesting --force
    res = runner.invoke(main, [
        "verify", "--family", "T", "--p", "3", "--n", "8", "--s", "1",
        "--eta", "primitive", "--mode", "projective"])
    # projective count of 3^16 is about 21.5M, below the default budget, so
    # this actually runs; use full mode on n=10 for a real budget trip
    res = runner.invoke(main, [
        "verify", "--family", "T", "--p", "3", "--n", "10", "--s", "1",
        "--eta", "primitive", "--mode", "full"])
    assert res.exit_code == 2
    assert "budget" in res.output


def test_verify_deterministic_payload(runner, tmp_path):
    args = ["verify", "--family", "S", "--p", "3", "--n", "6", "--s", "1",
            "--d", "6", "--mode", "full"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert runner.invoke(main, args + ["--out", str(a)]).exit_code == 0
    assert runner.invoke(main, args + ["--out", str(b)]).exit_code == 0
    pa, pb = json.loads(a.read_text()), json.loads(b.read_text())
    pa["report"].pop("elapsed_ms")
    pb["report"].pop("elapsed_ms")
    assert pa == pb


# -- dist ----------------------------------------------------------------------


def test_dist_csv(runner):
    res = runner.invoke(main, ["dist", "--family", "S", "--p", "3", "--n", "6",
                               "--s", "1", "--d", "6", "--format", "csv"])
    assert res.exit_code == 0
    assert res.output.splitlines() == ["rank,count", "6,728"]


def test_dist_compare(runner, tmp_path):
    out = tmp_path / "cmp.json"
    res = runner.invoke(main, [
        "dist", "--family", "S", "--p", "3", "--n", "6", "--s", "1", "--d", "6",
        "--family2", "S", "--s2", "1", "--d2", "4",
        "--mode", "sample", "--count", "400", "--seed", "3",
        "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert payload["verdict"] in ("distinguishing", "inconclusive")
    check_schema(payload)


def test_dist_compare_rejects_csv(runner):
    res = runner.invoke(main, [
        "dist", "--family", "S", "--p", "3", "--n", "6", "--s", "1", "--d", "6",
        "--family2", "S", "--s2", "1", "--d2", "4", "--format", "csv"])
    assert res.exit_code == 2


# -- dual ----------------------------------------------------------------------


def test_dual_report(runner, tmp_path):
    out = tmp_path / "dual.json"
    res = runner.invoke(main, [
        "dual", "--family", "T", "--p", "3", "--n", "6", "--s", "1",
        "--eta", "primitive", "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert payload["dim_fp"] == 9 == payload["expected_dim_fp"]
    assert payload["orthogonality_verified"] is True
    assert len(payload["basis"]) == 9
    check_schema(payload)


# -- equiv ---------------------------------------------------------------------


def test_equiv_apply(runner, tmp_path):
    out = tmp_path / "eq.json"
    res = runner.invoke(main, [
        "equiv", "--p", "3", "--n", "6", "--branch", "a", "--s1", "1",
        "--s2", "1", "--eta1", "primitive", "--eta2", "primitive^3",
        "--apply", "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert payload["equivalent"] is True
    assert payload["roundtrip_codes_equal"] is True
    check_schema(payload)


def test_equiv_branch_mismatch(runner):
    res = runner.invoke(main, [
        "equiv", "--p", "3", "--n", "6", "--branch", "a", "--s1", "1",
        "--s2", "5", "--eta1", "primitive", "--eta2", "primitive"])
    assert res.exit_code == 2


# -- minors --------------------------------------------------------------------


def test_minors_k3(runner, tmp_path):
    out = tmp_path / "minors.json"
    res = runner.invoke(main, ["minors", "--k", "3", "--trials", "60",
                               "--seed", "5", "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert payload["all_agree"] is True
    assert set(payload["results"]) == {"K3_M1", "K3_M2"}
    check_schema(payload)


# -- environment overrides -------------------------------------------------------


def test_env_var_override(runner):
    res = runner.invoke(main, ["bound", "--n", "6", "--d", "4"],
                        env={"SYMRANK_BOUND_Q": "3"})
    assert res.exit_code == 0
    assert res.output.strip() == "531441"
