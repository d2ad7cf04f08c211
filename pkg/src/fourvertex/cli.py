"""Command line surface: synth, analyze and demo subcommands."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, bicircle, moebius, solver
from .curvature import (
    TWO_PI,
    CurvatureProfile,
    HypothesisViolated,
    NoPositiveWindow,
    StepSpec,
    normalize_total,
    profile_from_step,
)
from .integrator import PlanarCurve, error_vector, integrate_curve
from .svg import Drawing

EXIT_OK = 0
EXIT_IO = 1
EXIT_INPUT = 2
EXIT_FAILED = 3


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def read_curvature_file(path: Path, n: int) -> CurvatureProfile:
    """Read a t,kappa CSV or a JSON profile and resample onto the grid."""
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        samples = np.asarray(data["samples"], dtype=float)
        interp = {"linear": "linear", "step": "step"}[data.get("interp", "linear")]
        prof = CurvatureProfile(samples, interp)
        if prof.n == n:
            return prof
        grid = TWO_PI * np.arange(n) / n
        return CurvatureProfile(np.asarray(prof(grid), dtype=float), interp)
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].replace(" ", "") != "t,kappa":
        raise ValueError("curvature CSV must start with header 't,kappa'")
    ts, ks = [], []
    for ln in lines[1:]:
        a, b = ln.split(",")
        ts.append(float(a))
        ks.append(float(b))
    ts = np.asarray(ts)
    ks = np.asarray(ks)
    if np.any(np.diff(ts) <= 0) or ts[0] < 0 or ts[-1] >= TWO_PI:
        raise ValueError("CSV parameters must increase strictly within [0, 2*pi)")
    grid = TWO_PI * np.arange(n) / n
    samples = np.interp(grid, ts, ks, period=TWO_PI)
    return CurvatureProfile(samples, "linear")


def write_curve_csv(path: Path, curve: PlanarCurve):
    rows = ["s,x,y,theta"]
    for s, p, th in zip(curve.s, curve.pos, curve.theta):
        rows.append(f"{_fmt(s)},{_fmt(p.real)},{_fmt(p.imag)},{_fmt(th)}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_curve_json(path: Path, curve: PlanarCurve):
    data = {
        "s": [float(v) for v in curve.s],
        "x": [float(p.real) for p in curve.pos],
        "y": [float(p.imag) for p in curve.pos],
        "theta": [float(v) for v in curve.theta],
        "closed": bool(curve.closed),
        "scale": float(curve.scale),
    }
    if curve.t is not None:
        data["t"] = [float(v) for v in curve.t]
    path.write_text(json.dumps(data, sort_keys=True, indent=1) + "\n",
                    encoding="utf-8")


def read_curve_file(path: Path) -> PlanarCurve:
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        pos = np.asarray(data["x"], float) + 1j * np.asarray(data["y"], float)
        return PlanarCurve(
            s=np.asarray(data["s"], float), pos=pos,
            theta=np.asarray(data["theta"], float),
            closed=bool(data.get("closed", False)),
            scale=float(data.get("scale", 1.0)),
            t=np.asarray(data["t"], float) if "t" in data else None)
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].replace(" ", "") != "s,x,y,theta":
        raise ValueError("curve CSV must start with header 's,x,y,theta'")
    cols = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    curve = PlanarCurve(s=cols[:, 0], pos=cols[:, 1] + 1j * cols[:, 2],
                        theta=cols[:, 3])
    return curve


def _curve_svg(curve: PlanarCurve, circle=None, vertices=None) -> str:
    d = Drawing(stroke_width=0.008 * max(1.0, float(np.max(np.abs(curve.pos)))))
    d.path(curve.pos)
    if circle is not None:
        d.circle(circle.center.real, circle.center.imag, circle.radius,
                 color="#3366cc")
    if vertices is not None:
        for (t0, _t1), kind, _v in vertices:
            j = int(np.argmin(np.abs((curve.t if curve.t is not None else curve.s)
                                     - t0)))
            p = curve.pos[j]
            d.dot(p.real, p.imag, 2.5 * d.stroke_width,
                  color="#cc0000" if kind == "max" else "#008800")
    return d.to_string()


def _interval_json(interval) -> dict:
    t0, t1 = interval
    return {"t_start": t0, "t_end": t1, "wraps": bool(t1 < t0)}


def _vertex_report_json(report: analysis.VertexReport) -> dict:
    return {
        "count": report.count,
        "vertices": [
            {"interval": _interval_json(iv), "kind": kind, "value": value}
            for iv, kind, value in report.vertices
        ],
    }


def _osserman_json(rep: analysis.OssermanReport) -> dict:
    return {
        "circle": {"center": [rep.circle.center.real, rep.circle.center.imag],
                   "radius": rep.circle.radius},
        "components": [
            {"interval": _interval_json(c.interval), "kind": c.kind}
            for c in rep.components
        ],
        "n": rep.n,
        "vertex_count": rep.vertex_count,
        "bound_2n_satisfied": rep.bound_2n_satisfied,
        "per_gap_low_points": [list(p) for p in rep.per_gap_low_points],
        "per_component_high_points": [list(p) for p in rep.per_component_high_points],
        "bonus_vertices": rep.bonus_vertices,
        "bonus_bound_satisfied": rep.bonus_bound_satisfied,
        "contact_gap": rep.contact_gap,
    }


def cmd_synth(args) -> int:
    out_dir = Path(args.out_dir)
    try:
        profile = read_curvature_file(Path(args.kappa_file), args.grid)
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as ex:
        print(f"error: bad curvature file: {ex}", file=sys.stderr)
        return EXIT_IO
    try:
        result = solver.synthesize(profile, eps0=args.eps0, r0=args.r0,
                                   max_rounds=args.max_rounds)
    except (HypothesisViolated, NoPositiveWindow) as ex:
        print(f"hypothesis violated: {ex}", file=sys.stderr)
        return EXIT_INPUT
    except solver.SynthesisFailed as ex:
        print(f"synthesis failed: {ex}", file=sys.stderr)
        return EXIT_FAILED
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.format == "csv":
        write_curve_csv(out_dir / "curve.csv", result.curve)
    else:
        write_curve_json(out_dir / "curve.json", result.curve)
    diag = {
        "beta_star": [result.beta_star.beta.real, result.beta_star.beta.imag],
        "eps_used": result.eps_used,
        "scale": result.scale.c,
        "sign_flipped": result.sign_flipped,
        "final_error": result.diagnostics.final_error,
        "position_distance": result.diagnostics.position_distance,
        "angle_distance": result.diagnostics.angle_distance,
        "rounds": result.diagnostics.rounds,
        "error_evaluations": result.diagnostics.error_evaluations,
    }
    (out_dir / "diagnostics.json").write_text(
        json.dumps(diag, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    if args.svg:
        (out_dir / "curve.svg").write_text(_curve_svg(result.curve),
                                           encoding="utf-8")
    print(f"closed curve written to {out_dir} (|E| = "
          f"{result.diagnostics.final_error:.3e})")
    return EXIT_OK


def cmd_analyze(args) -> int:
    out_dir = Path(args.out_dir)
    try:
        curve = read_curve_file(Path(args.curve_file))
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as ex:
        print(f"error: bad curve file: {ex}", file=sys.stderr)
        return EXIT_IO
    if not (curve.closed or curve.endpoint_gap() < 1e-6 * curve.length):
        print("error: curve is not closed", file=sys.stderr)
        return EXIT_INPUT
    out: dict = {}
    circle = None
    vertices = None
    try:
        report = analysis.detect_vertices(curve)
        out["vertex_report"] = _vertex_report_json(report)
        vertices = report.vertices
    except analysis.ConstantCurvature:
        out["vertex_report"] = {"count": 0, "vertices": [],
                                "constant_curvature": True}
    try:
        oss = analysis.osserman_check(curve, seed=args.seed)
        out["osserman"] = _osserman_json(oss)
        out["simple"] = True
        circle = oss.circle
    except analysis.NotSimple:
        out["simple"] = False
        circle = analysis.min_enclosing_circle(curve.pos, seed=args.seed)
    except analysis.ConstantCurvature:
        out["osserman"] = {"constant_curvature": True}
        out["simple"] = True
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "analysis.json").write_text(
        json.dumps(out, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    if args.svg:
        (out_dir / "analysis.svg").write_text(
            _curve_svg(curve, circle=circle, vertices=vertices), encoding="utf-8")
    print(f"analysis written to {out_dir}")
    return EXIT_OK


def _demo_bicircle(args, out_dir: Path) -> int:
    k0 = profile_from_step(StepSpec(0.5, 2.0), n=args.grid)
    curve = integrate_curve(normalize_total(k0)[0])
    err = error_vector(curve).magnitude
    d = Drawing(stroke_width=0.01)
    d.path(curve.pos, closed=True)
    (out_dir / "bicircle.svg").write_text(d.to_string(), encoding="utf-8")
    print(f"bicircle |E| = {err:.3e}")
    return EXIT_OK


def _demo_compass(args, out_dir: Path) -> int:
    panels = solver.compass_demo(0.5, 2.0, args.radius, args.panels,
                                 n_grid=args.grid)
    d = Drawing(stroke_width=0.02)
    spread = 9.0
    for j, (beta, curve, err) in enumerate(panels):
        phi = TWO_PI * j / len(panels)
        anchor = spread * complex(math.cos(phi), math.sin(phi))
        d.path(curve.pos + anchor)
        tip = anchor + err.e
        d.arrow(anchor.real, anchor.imag, tip.real, tip.imag)
    winding = solver.winding_number([e.e for _, _, e in panels])
    (out_dir / "compass.svg").write_text(d.to_string(), encoding="utf-8")
    print(f"compass error-loop winding = {winding:+d}")
    return EXIT_OK


def _project(xyz) -> tuple[float, float]:
    x, y, z = xyz
    # oblique projection keeps the tetrahedron legible
    return x + 0.42 * y, z + 0.28 * y


def _demo_tetrahedron(args, out_dir: Path) -> int:
    corners = [(0.0, 0.0, 0.0), (0.0, 0.0, 1.0), (0.0, 1.0, 1.0), (1.0, 1.0, 1.0)]
    d = Drawing(stroke_width=0.004)
    for i in range(4):
        for j in range(i + 1, 4):
            a, b = _project(corners[i]), _project(corners[j])
            d.polyline([a, b], color="#888888")
    p0 = bicircle.Configuration(1, 1j, -1, -1j)
    radii = np.linspace(0.08, 0.92, 12)
    angles = TWO_PI * np.arange(48) / 48

    def image(beta: complex):
        cfg = moebius.moebius_on_config(beta, p0)
        _, coords = bicircle.to_reduced(cfg)
        return _project((coords.x, coords.y, coords.z))

    for r in radii:
        d.polyline([image(r * np.exp(1j * a)) for a in angles],
                   color="#3366cc", closed=True)
    for a in angles[::4]:
        d.polyline([image(r * np.exp(1j * a)) for r in radii], color="#3366cc")
    core = [_project((0.0, 0.5, 0.5)), _project((0.5, 0.5, 1.0))]
    d.polyline(core, color="#cc0000", width=0.008)
    (out_dir / "tetrahedron.svg").write_text(d.to_string(), encoding="utf-8")
    print("tetrahedron demo written")
    return EXIT_OK


def cmd_demo(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.which == "bicircle":
        return _demo_bicircle(args, out_dir)
    if args.which == "compass":
        return _demo_compass(args, out_dir)
    return _demo_tetrahedron(args, out_dir)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--grid", type=int, default=4096,
                   help="profile grid size (power of two, at least 512)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--svg", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourvertex",
        description="Synthesize plane curves with preassigned curvature and "
                    "analyze vertices of closed curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="realize a curvature profile as a closed curve")
    p.add_argument("kappa_file")
    p.add_argument("--eps0", type=float, default=0.1)
    p.add_argument("--r0", type=float, default=0.2)
    p.add_argument("--max-rounds", type=int, default=20)
    _add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("analyze", help="vertex and enclosing-circle report")
    p.add_argument("curve_file")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("demo", help="figure demos")
    p.add_argument("which", choices=("bicircle", "compass", "tetrahedron"))
    p.add_argument("--panels", type=int, default=8)
    p.add_argument("--radius", type=float, default=0.2)
    _add_common(p)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.grid < 512 or args.grid & (args.grid - 1):
        print("error: --grid must be a power of two, at least 512",
              file=sys.stderr)
        return EXIT_INPUT
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
