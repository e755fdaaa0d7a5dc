import json
import os

import numpy as np
import pytest

from conecert.cli import main
from conecert.errors import ScenarioError
from conecert.report import render_csv, run_scenario
from conecert.scenario import load_scenario, parse_scenario

SCN_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "conecert",
                       "scenarios")


def _scn(name):
    return os.path.join(SCN_DIR, name + ".scn")


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


def _base_doc(**over):
    doc = {
        "name": "mini",
        "seed": 7,
        "cone": {"kind": "orthant", "dim": 2},
        "map": {"kind": "linear", "matrix": [[1.0, 0.0], [0.0, 1.0]]},
        "tasks": [{"kind": "certify", "points": [[0.2, 0.5]]}],
    }
    doc.update(over)
    return doc


# scenario parsing ---------------------------------------------------------

def test_parse_rejects_missing_seed():
    doc = _base_doc()
    del doc["seed"]
    with pytest.raises(ScenarioError):
        parse_scenario(doc)


def test_parse_rejects_bad_seed_values():
    for bad in (-1, 2 ** 64, 1.5, "7", True):
        with pytest.raises(ScenarioError):
            parse_scenario(_base_doc(seed=bad))


def test_parse_rejects_dimension_mismatch():
    doc = _base_doc()
    doc["tasks"] = [{"kind": "certify", "points": [[0.2, 0.5, 0.9]]}]
    with pytest.raises(ScenarioError):
        parse_scenario(doc)


def test_parse_rejects_unknown_task_kind():
    doc = _base_doc()
    doc["tasks"] = [{"kind": "frobnicate"}]
    with pytest.raises(ScenarioError):
        parse_scenario(doc)


def test_parse_rejects_exterior_anchor():
    with pytest.raises(ScenarioError):
        parse_scenario(_base_doc(anchor=[-1.0, 0.5]))


def test_scenario_echo_roundtrip():
    scn = load_scenario(_scn("orthant_perm3"))
    echo = scn.echo()
    again = parse_scenario(echo)
    assert again.echo() == echo
    assert again.seed == scn.seed
    assert np.array_equal(again.anchor, scn.anchor)
    assert again.map.kind == scn.map.kind


def test_empty_task_list_is_valid():
    doc = _base_doc(tasks=[])
    scn = parse_scenario(doc)
    report = run_scenario(scn)
    assert report.exit_status == 0
    assert render_csv(report) == "task,point_index,r,residual,margin_min\n"


# run command ---------------------------------------------------------------

def test_run_permutation_scenario(tmp_path, capsys):
    prefix = str(tmp_path / "out" / "perm")
    code = main(["run", _scn("orthant_perm3"), "--out", prefix,
                 "--no-figures"])
    assert code == 0
    out = capsys.readouterr().out
    assert "exit status 0" in out
    rep = json.load(open(prefix + ".report.json"))
    tasks = {t["kind"]: t for t in rep["tasks"]}
    assert tasks["global-report"]["global_period"] == 3
    assert all(t["passed"] for t in rep["tasks"])
    with open(prefix + ".residuals.csv") as fh:
        header = fh.readline().strip()
    assert header == "task,point_index,r,residual,margin_min"


def test_run_is_byte_deterministic(tmp_path):
    p1 = str(tmp_path / "a")
    p2 = str(tmp_path / "b")
    p3 = str(tmp_path / "c")
    assert main(["run", _scn("lorentz_rot5"), "--out", p1,
                 "--no-figures"]) == 0
    assert main(["run", _scn("lorentz_rot5"), "--out", p2,
                 "--no-figures"]) == 0
    assert main(["run", _scn("lorentz_rot5"), "--out", p3, "--threads", "4",
                 "--no-figures"]) == 0
    ref = open(p1 + ".report.json", "rb").read()
    assert open(p2 + ".report.json", "rb").read() == ref
    assert open(p3 + ".report.json", "rb").read() == ref
    ref_csv = open(p1 + ".residuals.csv", "rb").read()
    assert open(p2 + ".residuals.csv", "rb").read() == ref_csv
    assert open(p3 + ".residuals.csv", "rb").read() == ref_csv


def test_seed_override_changes_report(tmp_path):
    p1 = str(tmp_path / "a")
    p2 = str(tmp_path / "b")
    assert main(["run", _scn("orthant_perm3"), "--out", p1,
                 "--no-figures"]) == 0
    assert main(["run", _scn("orthant_perm3"), "--out", p2, "--seed", "99",
                 "--no-figures"]) == 0
    rep2 = json.load(open(p2 + ".report.json"))
    assert rep2["scenario"]["seed"] == 99
    assert open(p1 + ".report.json", "rb").read() != \
        open(p2 + ".report.json", "rb").read()


def test_run_renders_figures_by_default(tmp_path):
    prefix = str(tmp_path / "fig")
    assert main(["run", _scn("identity"), "--out", prefix]) == 0
    for suffix in (".residuals.png", ".margins.png"):
        with open(prefix + suffix, "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"


def test_no_figures_flag(tmp_path):
    prefix = str(tmp_path / "nofig")
    assert main(["run", _scn("identity"), "--out", prefix,
                 "--no-figures"]) == 0
    assert os.path.exists(prefix + ".report.json")
    assert not os.path.exists(prefix + ".residuals.png")


def test_expected_fail_scenarios_exit_zero(tmp_path):
    for name in ("contraction", "irrational_rotation"):
        prefix = str(tmp_path / name)
        assert main(["run", _scn(name), "--out", prefix,
                     "--no-figures"]) == 0
        rep = json.load(open(prefix + ".report.json"))
        glob = [t for t in rep["tasks"] if t["kind"] == "global-report"][0]
        assert glob["n_certified"] == 0
        assert glob["global_period"] is None
        reasons = {r["reason"] for r in glob["results"]}
        assert reasons == {"BoundaryPeriodicSearchFailed"}


def test_unexpected_pass_exits_one(tmp_path):
    doc = json.load(open(_scn("orthant_perm3")))
    doc["expected_fail"] = True
    path = _write(tmp_path, "weird.scn", doc)
    assert main(["run", path, "--out", str(tmp_path / "w"),
                 "--no-figures"]) == 1


def test_unexpected_failure_exits_one(tmp_path):
    doc = json.load(open(_scn("contraction")))
    doc["expected_fail"] = False
    path = _write(tmp_path, "c.scn", doc)
    assert main(["run", path, "--out", str(tmp_path / "c"),
                 "--no-figures"]) == 1


def test_parse_error_reports_line_and_column(tmp_path, capsys):
    p = tmp_path / "broken.scn"
    p.write_text('{"name": "x",\n  "seed": }', encoding="utf-8")
    assert main(["run", str(p)]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err and "column" in err


def test_malformed_cone_block_exits_two(tmp_path, capsys):
    doc = _base_doc(cone={"kind": "dodecahedral"})
    path = _write(tmp_path, "bad.scn", doc)
    assert main(["run", path]) == 2
    assert "dodecahedral" in capsys.readouterr().err


def test_missing_file_exits_two(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.scn")]) == 2


def test_unwritable_prefix_exits_two(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("x", encoding="utf-8")
    prefix = str(blocker / "sub" / "out")
    assert main(["run", _scn("identity"), "--out", prefix,
                 "--no-figures"]) == 2
    assert "cannot write" in capsys.readouterr().err


# demo command ---------------------------------------------------------------

def test_demo_runs_bundled_scenario(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["demo", "identity", "--no-figures"]) == 0
    assert os.path.exists("demo_identity.report.json")


def test_demo_unknown_name_lists_options(capsys):
    assert main(["demo", "zeppelin"]) == 2
    err = capsys.readouterr().err
    assert "orthant_perm3" in err


# validate command ------------------------------------------------------------

def _emit_certificate(tmp_path):
    prefix = str(tmp_path / "v")
    assert main(["run", _scn("orthant_perm3"), "--out", prefix,
                 "--no-figures"]) == 0
    rep = json.load(open(prefix + ".report.json"))
    certify = [t for t in rep["tasks"] if t["kind"] == "certify"][0]
    return certify["results"][0]["certificate"]


def test_validate_accepts_emitted_certificate(tmp_path, capsys):
    cert = _emit_certificate(tmp_path)
    path = _write(tmp_path, "cert.json", cert)
    assert main(["validate", path]) == 0
    assert "certificate is valid" in capsys.readouterr().out


def test_validate_rejects_tampered_certificate(tmp_path, capsys):
    cert = _emit_certificate(tmp_path)
    cert["lower"]["functionals"][0][0] += 0.4
    path = _write(tmp_path, "bad_cert.json", cert)
    assert main(["validate", path]) == 1
    assert "INVALID" in capsys.readouterr().out


def test_validate_rejects_non_certificate(tmp_path, capsys):
    path = _write(tmp_path, "notcert.json", {"hello": 1})
    assert main(["validate", path]) == 2


def test_validate_rejects_malformed_json(tmp_path):
    p = tmp_path / "garbage.json"
    p.write_text("{{{", encoding="utf-8")
    assert main(["validate", str(p)]) == 2
