import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from fourvertex import cli
from fourvertex.curvature import TWO_PI

from conftest import ellipse_curve, limacon_curve


def write_kappa_csv(path, fn, n=256):
    t = TWO_PI * np.arange(n) / n
    rows = ["t,kappa"] + [f"{float(tt)!r},{float(fn(tt))!r}" for tt in t]
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def test_synth_constant_circle(tmp_path):
    src = tmp_path / "kappa.csv"
    write_kappa_csv(src, lambda t: 1.0)
    out = tmp_path / "out"
    code = cli.main(["synth", str(src), "--out-dir", str(out), "--grid", "1024",
                     "--svg"])
    assert code == 0
    assert (out / "curve.csv").exists()
    diag = json.loads((out / "diagnostics.json").read_text())
    assert diag["final_error"] < 1e-9
    ET.fromstring((out / "curve.svg").read_text())


def test_synth_smooth_profile(tmp_path):
    src = tmp_path / "kappa.csv"
    write_kappa_csv(src, lambda t: 1.5 + math.cos(2 * t))
    out = tmp_path / "out"
    code = cli.main(["synth", str(src), "--out-dir", str(out), "--grid", "2048",
                     "--format", "json"])
    assert code == 0
    data = json.loads((out / "curve.json").read_text())
    assert data["closed"] is True
    assert len(data["s"]) == 2049


def test_synth_hypothesis_violated(tmp_path):
    src = tmp_path / "kappa.csv"
    write_kappa_csv(src, lambda t: 1.0 + 0.5 * math.sin(t))
    code = cli.main(["synth", str(src), "--out-dir", str(tmp_path / "o"),
                     "--grid", "1024"])
    assert code == 2


def test_synth_failure_exit_code(tmp_path):
    # a 512-sample grid cannot resolve the warp slivers, so every round fails
    src = tmp_path / "kappa.csv"
    write_kappa_csv(src, lambda t: 1.5 + math.cos(2 * t))
    code = cli.main(["synth", str(src), "--out-dir", str(tmp_path / "o"),
                     "--grid", "512", "--max-rounds", "4"])
    assert code == 3


def test_synth_missing_file(tmp_path):
    code = cli.main(["synth", str(tmp_path / "nope.csv"),
                     "--out-dir", str(tmp_path / "o")])
    assert code == 1


def test_grid_must_be_power_of_two(tmp_path):
    src = tmp_path / "kappa.csv"
    write_kappa_csv(src, lambda t: 1.0)
    assert cli.main(["synth", str(src), "--grid", "1000"]) == 2


def test_analyze_ellipse(tmp_path):
    curve = ellipse_curve(2048)
    path = tmp_path / "ellipse.csv"
    cli.write_curve_csv(path, curve)
    out = tmp_path / "rep"
    code = cli.main(["analyze", str(path), "--out-dir", str(out), "--svg"])
    assert code == 0
    data = json.loads((out / "analysis.json").read_text())
    assert data["simple"] is True
    assert data["vertex_report"]["count"] == 4
    assert data["osserman"]["n"] >= 1
    ET.fromstring((out / "analysis.svg").read_text())


def test_analyze_limacon_not_simple(tmp_path):
    curve = limacon_curve(2048)
    path = tmp_path / "limacon.csv"
    cli.write_curve_csv(path, curve)
    out = tmp_path / "rep"
    code = cli.main(["analyze", str(path), "--out-dir", str(out)])
    assert code == 0
    data = json.loads((out / "analysis.json").read_text())
    assert data["simple"] is False
    assert data["vertex_report"]["count"] == 2


def test_analyze_open_arc_rejected(tmp_path):
    t = np.linspace(0, 1, 64)
    rows = ["s,x,y,theta"] + [f"{float(s)!r},{float(s)!r},0.0,0.0" for s in t]
    path = tmp_path / "arc.csv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    assert cli.main(["analyze", str(path), "--out-dir", str(tmp_path / "o")]) == 2


def test_curve_round_trip_formats(tmp_path):
    curve = ellipse_curve(512)
    csv_path = tmp_path / "c.csv"
    cli.write_curve_csv(csv_path, curve)
    back = cli.read_curve_file(csv_path)
    assert np.max(np.abs(back.pos - curve.pos)) < 1e-15
    json_path = tmp_path / "c.json"
    cli.write_curve_json(json_path, curve)
    back = cli.read_curve_file(json_path)
    assert np.max(np.abs(back.pos - curve.pos)) < 1e-15
    assert back.t is not None


def test_outputs_are_deterministic(tmp_path):
    src = tmp_path / "kappa.csv"
    write_kappa_csv(src, lambda t: 1.5 + math.cos(2 * t))
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert cli.main(["synth", str(src), "--out-dir", str(out),
                         "--grid", "1024", "--seed", "7"]) == 0
        outs.append((out / "curve.csv").read_bytes()
                    + (out / "diagnostics.json").read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("which", ["bicircle", "compass", "tetrahedron"])
def test_demos_emit_wellformed_svg(tmp_path, which):
    out = tmp_path / "demo"
    code = cli.main(["demo", which, "--out-dir", str(out), "--grid", "1024"])
    assert code == 0
    svg = (out / f"{which}.svg").read_text()
    root = ET.fromstring(svg)
    assert "viewBox" in root.attrib


def test_demo_tetrahedron_core_segment_endpoints(tmp_path):
    out = tmp_path / "demo"
    assert cli.main(["demo", "tetrahedron", "--out-dir", str(out)]) == 0
    svg = (out / "tetrahedron.svg").read_text()
    p0 = cli._project((0.0, 0.5, 0.5))
    p1 = cli._project((0.5, 0.5, 1.0))
    assert f"{p0[0]:.6g},{-p0[1]:.6g}" in svg
    assert f"{p1[0]:.6g},{-p1[1]:.6g}" in svg


def test_json_profile_input(tmp_path):
    n = 512
    t = TWO_PI * np.arange(n) / n
    data = {"n": n, "samples": list(1.5 + np.cos(2 * t)), "interp": "linear"}
    src = tmp_path / "kappa.json"
    src.write_text(json.dumps(data), encoding="utf-8")
    out = tmp_path / "out"
    assert cli.main(["synth", str(src), "--out-dir", str(out),
                     "--grid", "2048"]) == 0
