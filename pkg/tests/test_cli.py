import json

import pytest
from click.testing import CliRunner

from knotfloer import checks
from knotfloer.cli import main, surgery_shift
from knotfloer.diagram import builtin


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, input=None):
        return runner.invoke(main, list(args), input=input)

    return invoke


def report(result):
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def test_hfk_text(run):
    r = run("hfk", "--builtin", "trefoil_right")
    assert r.exit_code == 0
    assert "(1,0): 1" in r.output and "(-1,-2): 1" in r.output


def test_hfk_json_is_deterministic(run):
    a = run("hfk", "--builtin", "knot_9_42", "--json")
    b = run("hfk", "--builtin", "knot_9_42", "--json")
    assert a.output == b.output
    rep = report(a)
    assert rep["schema"] == "knotfloer.report/1"
    assert rep["input_digest"].startswith("sha256:")


def test_digest_ignores_name_and_source(run, tmp_path):
    p = tmp_path / "t.json"
    obj = builtin("trefoil_right").to_json()
    obj["name"] = "something else"
    p.write_text(json.dumps(obj))
    from_file = report(run("hfk", str(p), "--json"))
    from_builtin = report(run("hfk", "--builtin", "trefoil_right", "--json"))
    assert from_file["input_digest"] == from_builtin["input_digest"]


def test_hfk_from_stdin(run):
    r = run("hfk", "-", input=builtin("unknot").dumps())
    assert r.exit_code == 0 and "(0,0): 1" in r.output


def test_integer_coefficients(run):
    assert run("hfk", "--builtin", "figure_eight", "--coefficients", "int").exit_code == 0


def test_complex_and_arrangement(run):
    c = json.loads(run("complex", "--builtin", "trefoil_left").output)
    assert len(c["generators"]) == 3 and len(c["arrows"]) == 2
    a = json.loads(run("complex", "--builtin", "trefoil_left", "--arrangement").output)
    assert len(a["points"]) == 3


@pytest.mark.parametrize("args", [
    ("hfk",),
    ("hfk", "--builtin", "trefoil_right", "extra.json"),
    ("hfk", "--builtin", "nope"),
    ("region", "--builtin", "unknot", "--region", "Bogus(1)"),
    ("surgery", "--builtin", "unknot", "--p", "0"),
    ("fibered", "--model", "sigma_s1", "--g", "2"),
    ("fibered", "--model", "macdonald", "--g", "2"),
])
def test_usage_errors_exit_2(run, args):
    assert run(*args).exit_code == 2


def test_invalid_diagram_exit_2(run, tmp_path):
    bad = builtin("unknot").to_json()
    bad["z"] = bad["w"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    r = run("hfk", str(p))
    assert r.exit_code == 2 and "CoincidentBasepoints" in r.output
    p.write_text("{")
    assert run("hfk", str(p)).exit_code == 2
    assert run("hfk", str(tmp_path / "missing.json")).exit_code == 2


def test_truncation_below_minimum_exit_2(run):
    assert run("region", "--builtin", "knot_9_42", "--region", "MaxNeg", "--truncation", "1").exit_code == 2


def test_compute_error_exit_3(run, monkeypatch):
    from knotfloer import cli
    from knotfloer.errors import TruncationUnstable

    def boom(*a, **k):
        raise TruncationUnstable("unstable")

    monkeypatch.setattr(cli, "region_homology", boom)
    assert run("region", "--builtin", "unknot", "--region", "MaxNeg").exit_code == 3


def test_surgery_shift_values():
    # unknot: the shifts are the d-invariants of the lens spaces
    assert surgery_shift(1, 0, "neg") == 0
    assert surgery_shift(5, 0, "neg") == -1
    assert surgery_shift(5, 0, "pos") == 1
    assert surgery_shift(5, 2, "pos") == surgery_shift(5, 3, "pos")


def test_surgery_nine_42(run):
    rep = report(run("surgery", "--builtin", "knot_9_42", "--p", "5", "--m", "1", "--json"))
    res = rep["result"]
    assert res["region"] == "IAndJ(1)"
    assert res["homology"]["reduced_rank"] == 1
    assert res["zero_surgery_reference"]["provenance"] == "literature value, not computed"
    big = report(run("surgery", "--builtin", "knot_9_42", "--p", "5", "--m", "2", "--json"))
    assert big["result"]["homology"]["reduced_rank"] == 0


def test_surgery_trefoil_text(run):
    r = run("surgery", "--builtin", "trefoil_right", "--p", "5", "--m", "0")
    assert r.exit_code == 0
    assert "tower from degree -1 (upward)" in r.output
    assert "reduced degree -2: 1" in r.output


def test_surgery_positive_side(run):
    rep = report(run("surgery", "--builtin", "unknot", "--p", "3", "--m", "1", "--side", "pos", "--json"))
    assert rep["result"]["homology"]["towers"] == [{"kind": "plus", "degree": "-1/6"}]


def test_surgery_small_p_warns(run):
    r = run("surgery", "--builtin", "knot_9_42", "--p", "1", "--json")
    assert r.exit_code == 0
    assert "warning" in r.output


def test_region_command(run):
    rep = report(run("region", "--builtin", "knot_9_42", "--region", "Box(1)", "--json"))
    assert rep["result"]["towers"] == []
    assert rep["command"]["region"] == "Box(1)"


@pytest.mark.parametrize("args,total", [
    (("--model", "sigma_s1", "--g", "3", "--k", "1"), 8),
    (("--model", "dehn_twist", "--g", "4", "--k", "2"), 8),
    (("--model", "x_module", "--g", "2", "--d", "1"), 6),
    (("--model", "macdonald", "--g", "1", "--d", "2"), 8),
])
def test_fibered(run, args, total):
    rep = report(run("fibered", *args, "--json"))
    assert rep["result"]["total_rank"] == total


def test_fibered_regime_note(run):
    r = run("fibered", "--model", "dehn_twist", "--g", "5", "--k", "1")
    assert "ranks only" in r.output


def test_selftest_filter(run):
    r = run("selftest", "--filter", "fibered")
    assert r.exit_code == 0
    lines = [l for l in r.output.splitlines() if l.startswith("[")]
    assert len(lines) == 4 and all(l.startswith("[PASS]") for l in lines)


def test_selftest_json_deterministic(run):
    a = run("selftest", "--filter", "borromean", "--json")
    b = run("selftest", "--filter", "borromean", "--json")
    assert a.output == b.output and json.loads(a.output)["result"]["failed"] == []


def test_selftest_reports_corrupted_builtin(run, monkeypatch):
    # the data file for the trefoil now holds a different knot
    monkeypatch.setattr(checks, "builtin", lambda name: builtin("figure_eight"))
    monkeypatch.setattr(checks, "_cache", {})
    r = run("selftest", "--filter", "trefoil table")
    assert r.exit_code == 1
    assert r.output.startswith("[FAIL]  1. trefoil table")


def test_selftest_survives_crashing_builtin(run, monkeypatch):
    def broken(name):
        raise RuntimeError("corrupt data file")

    monkeypatch.setattr(checks, "complex_of", broken)
    r = run("selftest", "--filter", "9_42 homology")
    assert r.exit_code == 1 and "corrupt data file" in r.output
