import json

import pytest
from openpyxl import load_workbook

from courant import DEGREE_CAP_VARIABLE
from qpg import main, run_check
from report import FAIL, INCONCLUSIVE, PASS, SKIPPED, Report
from schema import InputDocument, SchemaError
from symbolic_core import format_polynomial

R3 = {"variables": ["x", "y", "z"], "name": "R3"}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


# ===============================
# CHECK
# ===============================
def test_check_standard_courant(tmp_path, capsys):
    doc = write(tmp_path, "r2.json", {"chart": {"variables": ["x", "y"], "name": "R2"}, "courant": {"kind": "standard"}})
    out = tmp_path / "r2-report.json"
    assert main(["check", "courant", "-i", doc, "--json", str(out), "--slow"]) == 0
    printed = capsys.readouterr().out
    assert "C-1 jacobi" in printed
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["title"] == "courant axioms on TR2"
    assert {c["status"] for c in payload["checks"]} == {PASS}


def test_function_multiples_need_the_slow_flag(tmp_path):
    doc = write(tmp_path, "r2.json", {"chart": {"variables": ["x", "y"], "name": "R2"}, "courant": {"kind": "standard"}})
    fast = run_check("courant", doc)
    assert fast.status_of("function multiples") == SKIPPED
    assert fast.status_of("C-1 jacobi") == PASS
    full = run_check("courant", doc, slow=True)
    assert "function multiples" not in [o.name for o in full]
    assert full.status_of("C-1 jacobi") == PASS


def test_dirac_beyond_the_degree_cap_is_inconclusive(tmp_path, monkeypatch):
    doc = write(tmp_path, "graph.json", {"chart": R3, "courant": {"kind": "standard"}, "dirac": {"bivector": {"y,z": "x"}}})
    assert main(["check", "dirac", "-i", doc, "--slow", "--quiet"]) == 0
    monkeypatch.setenv(DEGREE_CAP_VARIABLE, "0")
    assert run_check("dirac", doc, slow=True).status_of("involutive") == INCONCLUSIVE
    assert main(["check", "dirac", "-i", doc, "--slow", "--quiet"]) == 3
    # without multiples the graph sections close at degree 0
    assert main(["check", "dirac", "-i", doc, "--quiet"]) == 0


def test_check_twisted_dirac_graph(tmp_path):
    doc = write(
        tmp_path,
        "graph.json",
        {
            "chart": R3,
            "courant": {"kind": "standard", "eta": {"x,y,z": "1"}},
            "dirac": {"two_form": {"y,z": "-x"}},
        },
    )
    assert main(["check", "dirac", "-i", doc, "--quiet"]) == 0


def test_check_reports_a_broken_bivector(tmp_path):
    doc = write(
        tmp_path,
        "bent.json",
        {"algebra": "so3", "chart": R3, "action": "trivial", "bivector": {"x,y": "z", "x,z": "-x^3"}},
    )
    report = run_check("quasi-poisson", doc)
    assert report.status_of("[pi,pi] = rho(phi)") == FAIL
    assert main(["check", "quasi-poisson", "-i", doc, "--quiet"]) == 2


def test_check_manin_triple_from_ghat_pair(tmp_path):
    doc = write(tmp_path, "pair.json", {"algebra": "so3", "subalgebras": "ghat-pair"})
    report = run_check("manin-triple", doc)
    assert report.status_of("transversal") == PASS


def test_check_bialgebra_over_a_point(tmp_path):
    doc = write(tmp_path, "point.json", {"algebra": "sl2", "bialgebroid": "point"})
    report = run_check("bialgebroid", doc)
    assert report.status_of("D^2 = 1/2 [rho(phi), .]") == PASS
    assert report.status_of("d_A* squared = 0") == PASS
    assert main(["check", "bialgebroid", "-i", doc, "--quiet"]) == 0


def test_tangent_bialgebroid_needs_the_slow_flag(tmp_path):
    doc = write(
        tmp_path, "tangent.json", {"algebra": "so3", "chart": R3, "action": "trivial", "bialgebroid": "tangent"}
    )
    assert run_check("bialgebroid", doc).status_of("tangent bialgebroid") == SKIPPED


def test_check_coisotropy(tmp_path):
    doc = write(tmp_path, "cois.json", {"chart": R3, "bivector": {"y,z": "x"}, "generators": ["x", "y"]})
    assert run_check("coisotropy", doc).status_of("coisotropic") == PASS
    doc = write(tmp_path, "not-cois.json", {"chart": R3, "bivector": {"y,z": "x"}, "generators": ["y", "z"]})
    assert main(["check", "coisotropy", "-i", doc, "--quiet"]) == 2


# ===============================
# INPUT ERRORS
# ===============================
def test_malformed_polynomial_reports_position(tmp_path, capsys):
    doc = write(tmp_path, "bad.json", {"algebra": "so3", "chart": R3, "action": "trivial", "bivector": {"y,z": "x + * y"}})
    assert main(["check", "quasi-poisson", "-i", doc]) == 1
    printed = capsys.readouterr().out
    assert "$.bivector['y,z']" in printed
    assert "position 4" in printed


@pytest.mark.parametrize(
    "doc",
    [
        {"algebra": "so5", "chart": R3, "action": "trivial"},
        {"algebra": "so3", "chart": R3, "action": {"e4": {"x": "1"}}},
        {"algebra": "so3", "chart": R3, "action": "conjugation"},
        {"algebra": "so3", "chart": R3, "action": "trivial", "bivector": {"x,w": "1"}},
        {"algebra": "so3", "chart": R3, "action": "trivial", "points": [[1, 2]]},
    ],
    ids=["unknown-algebra", "unknown-basis", "needs-group", "unknown-variable", "short-point"],
)
def test_schema_errors_exit_with_input_error(tmp_path, doc):
    path = write(tmp_path, "doc.json", doc)
    assert main(["check", "quasi-poisson", "-i", path, "--quiet"]) == 1


def test_printed_conjugation_bivector_is_negated_on_load():
    base = {"algebra": "sl2", "chart": {"group": True}, "action": "conjugation"}
    stored = InputDocument({**base, "bivector": "conjugation"})
    pi, chart = stored.bivector(), stored.chart()
    printed = {",".join(chart.variables[i] for i in key): format_polynomial(-c) for key, c in pi.terms.items()}
    assert InputDocument({**base, "bivector": printed, "convention": "printed"}).bivector() == pi
    assert InputDocument({**base, "bivector": printed}).bivector() == -pi
    with pytest.raises(SchemaError):
        InputDocument({**base, "bivector": printed, "convention": "halved"}).bivector()


def test_points_off_the_variety(tmp_path, capsys):
    doc = write(
        tmp_path,
        "hyperbola.json",
        {
            "algebra": {"abelian": 1},
            "chart": {"variables": ["a", "b"], "ideal": ["a*b - 1"]},
            "action": "trivial",
            "courant": {"kind": "action"},
        },
    )
    points = write(tmp_path, "points.json", [[1, 2]])
    assert main(["check", "courant", "-i", doc, "--points", points]) == 1
    assert "$.points[0]" in capsys.readouterr().out


def test_unreadable_input(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert main(["check", "courant", "-i", str(broken), "--quiet"]) == 1
    assert main(["check", "courant", "-i", str(tmp_path / "missing.json"), "--quiet"]) == 1


# ===============================
# EXAMPLES
# ===============================
def test_list_examples(capsys):
    assert main(["list-examples"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 10
    assert lines[0].startswith("abelian-r2")


def test_verify_example_writes_json(tmp_path):
    out = tmp_path / "abelian.json"
    main(["verify-example", "abelian-r2", "--json", str(out), "--quiet"])
    report = Report.from_payload(json.loads(out.read_text(encoding="utf-8")))
    assert report.title == "abelian-r2"
    assert report.status_of("expected outcomes") == PASS


def test_verify_unknown_example(capsys):
    assert main(["verify-example", "abelian-r3"]) == 1
    assert "abelian-r3" in capsys.readouterr().out


def test_speed_flags_are_exclusive():
    with pytest.raises(SystemExit):
        main(["verify-example", "abelian-r2", "--slow", "--skip-slow"])


# ===============================
# MERGING
# ===============================
def test_report_merge_and_excel(tmp_path, capsys):
    runs = tmp_path / "runs"
    runs.mkdir()
    good = Report("good")
    good.add("first", True)
    bad = Report("bad")
    bad.add("second", False, "residue x")
    (runs / "good.json").write_text(good.to_json(), encoding="utf-8")
    (runs / "bad.json").write_text(bad.to_json(), encoding="utf-8")

    workbook = tmp_path / "merged.xlsx"
    assert main(["report", "--merge", str(runs), "--excel", str(workbook)]) == 2
    printed = capsys.readouterr().out
    assert "bad: second" in printed and "good: first" in printed
    assert load_workbook(workbook).sheetnames == ["bad", "good"]


def test_report_merge_of_an_empty_directory(tmp_path, capsys):
    assert main(["report", "--merge", str(tmp_path)]) == 1
    assert "no reports" in capsys.readouterr().out
