import json
import math

import pytest

from zhongvar.cli import main

TWO_POINT = {
    "name": "two-point",
    "theorem": "zvp",
    "space": {"n": 2, "d": [[0, 1], [2, 0]]},
    "potential": {"phi": [2, 0]},
    "bifunction": {"F": [[0, -2], [2, 0]]},
    "normal": {"kind": "inv1p"},
    "weight": {"kind": "anchor", "a": 0},
    "u": 0,
    "rho": 7.0,
}


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "two_point.json"
    path.write_text(json.dumps(TWO_POINT))
    return path


def _read(path):
    return json.loads(path.read_text())


# --- solve ---------------------------------------------------------------------

def test_solve_two_point_passes(scenario_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["solve", "--scenario", str(scenario_file), "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "PASS" in text and "found v = 1" in text
    report = _read(out)
    assert report["passed"] is True
    assert report["certificate"]["v"] == 1
    names = {q["name"] for q in report["certificate"]["inequalities"]}
    assert {"descent_bound", "maximality[0]", "weighted_lower",
            "weighted_cap[0]"} <= names


def test_solve_report_is_deterministic(scenario_file, tmp_path):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["solve", "--scenario", str(scenario_file), "--out", str(out1)]) == 0
    assert main(["solve", "--scenario", str(scenario_file), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_theorem_override(scenario_file, tmp_path):
    out = tmp_path / "r.json"
    code = main(["solve", "--scenario", str(scenario_file),
                 "--theorem", "eq-zhong", "--out", str(out)])
    assert code == 0
    report = _read(out)
    assert report["theorem"] == "eq-zhong"
    names = {q["name"] for q in report["certificate"]["inequalities"]}
    assert "marginal_cap" in names and "equilibrium[0]" in names


@pytest.mark.parametrize("selector", ["evp", "evp-local", "zvp", "zvp-local",
                                      "eq", "eq-zhong", "bkp"])
def test_all_selectors_pass_on_fixture(scenario_file, selector):
    assert main(["solve", "--scenario", str(scenario_file),
                 "--theorem", selector]) == 0


def test_premise_violation_exits_3(tmp_path):
    raw = dict(TWO_POINT)
    raw["rho"] = 3.0  # bound log 4 < height 2
    path = tmp_path / "s.json"
    path.write_text(json.dumps(raw))
    assert main(["solve", "--scenario", str(path), "--theorem", "zvp-local"]) == 3


def test_domain_error_exits_3(tmp_path):
    raw = dict(TWO_POINT)
    raw["potential"] = {"phi": ["inf", 0]}
    raw["u"] = 0
    path = tmp_path / "s.json"
    path.write_text(json.dumps(raw))
    assert main(["solve", "--scenario", str(path), "--theorem", "evp"]) == 3


def test_parse_error_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["solve", "--scenario", str(bad)]) == 2
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"theorem": "zvp"}))
    assert main(["solve", "--scenario", str(missing)]) == 2
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"theorem": "frobnicate"}))
    assert main(["solve", "--scenario", str(unknown)]) == 2


# --- validate ---------------------------------------------------------------------

def test_validate_passes_on_fixture(scenario_file):
    assert main(["validate", "--scenario", str(scenario_file)]) == 0


def test_validate_flags_triangle_violation(tmp_path, capsys):
    raw = {
        "name": "broken",
        "theorem": "validate",
        "space": {"n": 3, "d": [[0, 3, 1], [9, 0, 9], [9, 1, 0]]},
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(raw))
    assert main(["validate", "--scenario", str(path)]) == 1
    text = capsys.readouterr().out
    assert "triangular" in text and "FAIL" in text


def test_validate_flags_bad_weight(tmp_path):
    raw = dict(TWO_POINT)
    raw["weight"] = {"kind": "explicit", "values": [0.0, 2.0]}
    path = tmp_path / "w.json"
    path.write_text(json.dumps(raw))
    assert main(["validate", "--scenario", str(path)]) == 1


# --- properties --------------------------------------------------------------------

def test_properties_pass_for_reciprocal_profile(scenario_file, tmp_path):
    out = tmp_path / "props.json"
    code = main(["properties", "--scenario", str(scenario_file),
                 "--out", str(out)])
    assert code == 0
    report = _read(out)
    assert report["properties"]["passed"] is True
    assert report["properties"]["kind"] == "inv1p"
    assert report["properties"]["max_quadrature_gap"] <= 1e-8


def test_properties_fail_for_rigged_profile(tmp_path):
    raw = {
        "name": "rigged",
        "theorem": "properties",
        "normal": {"kind": "table", "samples": [[0.0, 1e-18]]},
        "samples": 100,
    }
    path = tmp_path / "rigged.json"
    path.write_text(json.dumps(raw))
    # integral grows too slowly to certify growth past the default bound
    assert main(["properties", "--scenario", str(path)]) == 1


# --- generate + corpus runs -----------------------------------------------------------

def test_generate_and_solve_corpus(tmp_path, capsys):
    corpus_dir = tmp_path / "corpus"
    assert main(["generate", "--seed", "5", "--n", "4", "--count", "6",
                 "--out", str(corpus_dir)]) == 0
    files = sorted(corpus_dir.glob("*.json"))
    assert len(files) == 6
    reports_dir = tmp_path / "reports"
    code = main(["solve", "--scenario", str(corpus_dir),
                 "--out", str(reports_dir)])
    assert code == 0
    assert len(list(reports_dir.glob("*.report.json"))) == 6
    text = capsys.readouterr().out
    assert text.count("PASS") >= 6


def test_generate_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["generate", "--seed", "9", "--n", "3", "--count", "4",
                 "--out", str(a)]) == 0
    assert main(["generate", "--seed", "9", "--n", "3", "--count", "4",
                 "--out", str(b)]) == 0
    for pa, pb in zip(sorted(a.glob("*.json")), sorted(b.glob("*.json"))):
        assert pa.read_bytes() == pb.read_bytes()


def test_generate_rejects_bad_sizes(tmp_path):
    assert main(["generate", "--seed", "1", "--n", "0", "--count", "1",
                 "--out", str(tmp_path / "x")]) == 2


def test_parallel_corpus_run(tmp_path):
    corpus_dir = tmp_path / "corpus"
    main(["generate", "--seed", "11", "--n", "3", "--count", "4",
          "--out", str(corpus_dir)])
    assert main(["solve", "--scenario", str(corpus_dir), "--jobs", "2"]) == 0


def test_missing_scenario_dir_is_parse_error(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["solve", "--scenario", str(empty)]) == 2


def test_hundred_instance_corpus_all_pass(tmp_path, capsys):
    corpus_dir = tmp_path / "big"
    assert main(["generate", "--seed", "0", "--n", "8", "--count", "100",
                 "--out", str(corpus_dir)]) == 0
    assert main(["solve", "--scenario", str(corpus_dir)]) == 0
    text = capsys.readouterr().out
    assert text.count(": PASS") == 100
