import json
import math
import subprocess
import sys

import pytest

from transurf.cli import main
from transurf.report import dumps


def run_cli(args):
    return main(list(args))


def test_scan_catalog_pair(tmp_path, capsys):
    rep = tmp_path / "report.json"
    csv = tmp_path / "locus.csv"
    code = run_cli(["scan", "--curve-a", "@s0_a", "--curve-b", "@s0_b",
                    "--window=-2,2,-2,2", "--grid", "32",
                    "--report", str(rep), "--out", str(csv)])
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["schema"] == "transurf-report-v1"
    pts = doc["singular_points"]
    assert len(pts) == 1
    assert pts[0]["verdict"]["tag"] == "CrossCap"
    assert abs(pts[0]["u"]) < 1e-8 and abs(pts[0]["v"]) < 1e-8
    rows = csv.read_text().strip().split("\n")
    assert rows[0] == "u,v,conditions,dependence,isolated"
    assert len(rows) == 2


def test_scan_expression_curves(tmp_path):
    rep = tmp_path / "report.json"
    code = run_cli(["scan", "--curve-a", "(u, u^2/2, 0)",
                    "--frame-a", "(-u/sqrt(1+u^2), 1/sqrt(1+u^2), 0);(0, 0, 1)",
                    "--curve-b", "(v, 0, v^2/2)",
                    "--frame-b", "(v/sqrt(1+v^2), 0, -1/sqrt(1+v^2));(0, 1, 0)",
                    "--window=-1.5,1.5,-1.5,1.5", "--grid", "24",
                    "--report", str(rep)])
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["singular_points"][0]["verdict"]["tag"] == "CrossCap"


def test_scan_sin_self_minus(tmp_path):
    rep = tmp_path / "r.json"
    code = run_cli(["scan", "--curve-a", "@sin_curve", "--self", "minus",
                    f"--window={-math.pi},{math.pi},{-math.pi},{math.pi}",
                    "--grid", "36", "--report", str(rep)])
    assert code == 0
    doc = json.loads(rep.read_text())
    canon = doc["canonical_points"]
    iso = sorted((q["u"], q["v"]) for q in canon if q["isolated"])
    assert len(iso) == 4
    expect = sorted([(0.0, math.pi), (math.pi / 2, 3 * math.pi / 2),
                     (math.pi, 0.0), (3 * math.pi / 2, math.pi / 2)])
    for got, want in zip(iso, expect):
        assert got == pytest.approx(want, abs=1e-7)
    cross_caps = [p for p in doc["singular_points"]
                  if p["verdict"]["tag"] == "CrossCap"]
    assert len(cross_caps) >= 4
    assert doc["isolated_image_count"] == 4
    diag = [p for p in doc["singular_points"] if not p["isolated"]]
    assert len(diag) >= 30


def test_scan_sin_self_plus_image_count(tmp_path):
    rep = tmp_path / "r.json"
    code = run_cli(["scan", "--curve-a", "@sin_curve", "--self", "plus",
                    f"--window={-math.pi},{math.pi},{-math.pi},{math.pi}",
                    "--grid", "36", "--report", str(rep)])
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["isolated_image_count"] == 2


def test_mesh_grid_combinatorics(tmp_path):
    obj = tmp_path / "mesh.obj"
    code = run_cli(["mesh", "--curve-a", "@s1p_a", "--curve-b", "@s1p_b",
                    "--window=-1,1,-1,1", "--grid", "33", "--out", str(obj)])
    assert code == 0
    lines = obj.read_text().strip().split("\n")
    vs = [l for l in lines if l.startswith("v ")]
    fs = [l for l in lines if l.startswith("f ")]
    assert len(vs) == 1089
    assert len(fs) == 2048
    # contains the image of the origin: gamma(0) + gamma~(0) = 0
    assert "v 0 0 0" in lines


def test_mesh_sin_self_minus_diagonal_at_origin(tmp_path):
    obj = tmp_path / "m.obj"
    code = run_cli(["mesh", "--curve-a", "@sin_curve", "--self", "minus",
                    "--window=-3,3,-3,3", "--grid", "17", "--out", str(obj)])
    assert code == 0
    lines = obj.read_text().strip().split("\n")
    # 17 diagonal samples all map exactly to the origin
    assert lines.count("v 0 0 0") == 17


def test_determinism_byte_identical(tmp_path):
    args = ["scan", "--curve-a", "@s1m_a", "--curve-b", "@s1m_b",
            "--window=-1,1,-1,1", "--grid", "24"]
    rep1, rep2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(args + ["--report", str(rep1)]) == 0
    assert run_cli(args + ["--report", str(rep2)]) == 0
    assert rep1.read_bytes() == rep2.read_bytes()

    obj1, obj2 = tmp_path / "a.obj", tmp_path / "b.obj"
    margs = ["mesh", "--curve-a", "@s0_a", "--curve-b", "@s0_b",
             "--window=-1,1,-1,1", "--grid", "21"]
    assert run_cli(margs + ["--out", str(obj1)]) == 0
    assert run_cli(margs + ["--out", str(obj2)]) == 0
    assert obj1.read_bytes() == obj2.read_bytes()


def test_tolerance_override(tmp_path):
    rep = tmp_path / "r.json"
    code = run_cli(["scan", "--curve-a", "@s0_a", "--curve-b", "@s0_b",
                    "--window=-1,1,-1,1", "--grid", "16",
                    "--tol", "sing_tol=1e-10", "--tol", "crit_tol=1e-9",
                    "--report", str(rep)])
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["input"]["tolerances"]["sing_tol"] == 1e-10


@pytest.mark.parametrize("args", [
    ["scan", "--curve-a", "@s0_a", "--curve-b", "@s0_b",
     "--window=1,-1,0,1"],                          # empty window
    ["scan", "--curve-a", "@s0_a", "--curve-b", "@s0_b", "--grid", "4"],
    ["scan", "--curve-a", "@nope", "--curve-b", "@s0_b"],
    ["scan", "--curve-a", "(u, ", "--curve-b", "@s0_b"],
    ["scan", "--curve-a", "@s0_a"],                 # no partner
    ["scan", "--curve-a", "@s0_a", "--curve-b", "@s0_b",
     "--tol", "bogus=1"],
    ["mesh", "--curve-a", "@s0_a", "--curve-b", "@s0_b"],   # no --out
])
def test_input_errors_exit_2(args, capsys):
    assert run_cli(args) == 2
    assert "error:" in capsys.readouterr().err


def test_verify_command(capsys):
    assert run_cli(["verify", "jets"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "checks passed" in out


def test_entry_point_subprocess():
    proc = subprocess.run([sys.executable, "-m", "transurf.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0


def test_report_float_format():
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps({"a": [1.5, True, None]}) == (
        '{\n  "a": [\n    1.5,\n    true,\n    null\n  ]\n}')
