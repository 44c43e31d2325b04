import json

import pytest

from raagbraid.artin_words import WordError
from raagbraid.graph import Graph, builtin
from raagbraid.harness_cli import (EXIT_BUDGET, EXIT_FAIL, EXIT_INPUT, EXIT_OK, ExperimentReport,
                                   Presentation, check_presentation_hom, cmd_cox, cmd_diagram,
                                   cmd_growth, cmd_lowerbound, fit_line, main, reduced_ball)


def test_presentation_checker():
    free = Presentation.parse(["x", "y"], [])
    assert check_presentation_hom(free, {"x": "a", "y": "b"}, Graph(("a", "b")))["ok"]
    z2 = Presentation.parse(["x", "y"], ["x y x^-1 y^-1"])
    edge = Graph.from_edges("ab", [("a", "b")])
    assert check_presentation_hom(z2, {"x": "a", "y": "b"}, edge)["ok"]
    rep = check_presentation_hom(z2, {"x": "a", "y": "b"}, Graph(("a", "b")))
    assert not rep["ok"] and rep["failures"] == ["x y x^-1 y^-1"]
    with pytest.raises(WordError):
        check_presentation_hom(z2, {"x": "a"}, edge)
    with pytest.raises(WordError):
        Presentation.parse(["x"], ["x z"])


def test_report_rendering(tmp_path):
    rep = ExperimentReport("demo", {"seed": 1}, ["a", "b"])
    rep.add(1, "x")
    rep.verdict("ok", True)
    assert rep.to_tsv() == "a\tb\n1\tx\n"
    rep.write(str(tmp_path))
    assert json.loads((tmp_path / "demo.json").read_text())["passed"] is True
    assert rep.render("tsv").endswith("# PASS ok")


def test_growth_report():
    rep = cmd_growth("crossing_pair", "c1", 12)
    assert len(rep.rows) == 12 and rep.passed


def test_cox_report_deterministic():
    a = cmd_cox("icosahedron", 20, 50, 7)
    b = cmd_cox("icosahedron", 20, 50, 7)
    assert a.to_tsv() == b.to_tsv() and a.passed
    assert a.fitted["index"] == 4096


def test_diagram_check_icosa():
    rep = cmd_diagram("check", "icosa")
    table = dict(rep.rows)
    assert table["isomorphic_to_expected"] is True
    assert table["complement_planar"] is False and table["complement_witness"] == "K3,3"
    assert rep.passed


def test_lowerbound_report():
    rep = cmd_lowerbound(4, "s1 s2 s3^-1 s1")
    assert rep.passed and rep.rows[0][-1] <= 4


def test_fit_line():
    s, i, r2 = fit_line([1, 2, 3], [2, 4, 6])
    assert abs(s - 2) < 1e-12 and abs(i) < 1e-9 and r2 == pytest.approx(1)


def test_reduced_ball_counts():
    # free group of rank 2: 1 + 4 + 12 + 36 elements in the ball of radius 3
    assert len(reduced_ball(Graph(("a", "b")), 3)) == 53
    assert len(reduced_ball(Graph.from_edges("ab", [("a", "b")]), 2)) == 13


def test_exit_codes(capsys, tmp_path):
    assert main(["graph", "cycle_5"]) == EXIT_OK
    assert main(["graph", "no_such_graph"]) == EXIT_INPUT
    assert main(["raag", "cycle_5", "v1 zz"]) == EXIT_INPUT
    assert main(["diagram", "check", "pentagon_c5", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "diagram_check.tsv").exists()
    assert main(["lowerbound", "3", "s1 s2^-1", "--format", "json"]) == EXIT_OK
    assert main(["complexity", "3", "s7"]) == EXIT_INPUT
    assert main(["embed", "pentagon_c5", "--budget", "1"]) == EXIT_BUDGET
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"circles": [{"cx": "0", "cy": "0", "r": "1/2"},
                                           {"cx": "1/2", "cy": "0", "r": "1/2"}]}))
    assert main(["diagram", "info", str(bad)]) == EXIT_INPUT
    capsys.readouterr()


def test_verdict_failure_exit_code(monkeypatch):
    import raagbraid.harness_cli as h
    monkeypatch.setattr(h, "GROWTH_STEP", 100)
    assert main(["verify", "growth", "crossing_pair", "--generator", "c1", "--pmax", "3"]) \
        == EXIT_FAIL
