"""Degree-based zero finding over the Möbius disk and curve synthesis.

The endpoint error of a normalized curvature profile, precomposed with the
disk of special Möbius maps, winds once around the origin along small
parameter circles.  A quadtree subdivision of the parameter square keeps
the cell whose boundary winding is nonzero, and a two-variable secant
polish finishes the root.  The synthesis pipeline warps an admissible
profile onto a two-value step function, closes the curve by that root, and
reparameterizes the result back to the original parameter.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .curvature import (
    TWO_PI,
    CircleDiffeo,
    ConstructionFailed,
    CurvatureProfile,
    HypothesisViolated,
    ScaleFactor,
    StepSpec,
    build_h1,
    compose,
    find_abab_points,
    normalize_total,
    profile_from_step,
    reflect_negate,
)
from .integrator import (
    ErrorVector,
    PlanarCurve,
    curvature_samples,
    error_vector,
    integrate_arcs,
    integrate_curve,
    is_simple,
    reverse_curve,
    scale_curve,
)
from .moebius import MoebiusParameter, _beta_value, moebius_apply, moebius_lift

RESIDUAL_TOL = 1e-9
CELL_HALF_MIN = 3.5e-7   # cell diagonal below 1e-6
ZERO_ON_EDGE = 1e-12
C1_POSITION_TOL = 0.1
C1_ANGLE_TOL = 0.1


class OriginOnLoop(ValueError):
    """A loop point coincides with the origin."""


class InsufficientDensity(ValueError):
    """Consecutive loop samples turn by a quarter turn or more."""


class NoWindingAtRadius(RuntimeError):
    """The error loop at the requested radius does not wind."""


class PolishDiverged(RuntimeError):
    """Root polishing failed; carries the best candidate found."""

    def __init__(self, beta: complex, residual: float):
        super().__init__(f"polish stalled at residual {residual:.3e}")
        self.beta = beta
        self.residual = residual


class SynthesisFailed(RuntimeError):
    """All rounds of the synthesis schedule failed; carries the round log."""

    def __init__(self, history: list):
        super().__init__("synthesis failed: " + "; ".join(
            f"round {r} (eps={e:.3g}, r={rad:.3g}): {why}" for r, e, rad, why in history))
        self.history = history


@dataclass(frozen=True)
class SynthesisDiagnostics:
    final_error: float
    position_distance: float
    angle_distance: float
    rounds: int
    error_evaluations: int


@dataclass(frozen=True)
class SynthesisResult:
    """Closed simple curve realizing a preassigned curvature function.

    ``curve.t`` tags every sample with the original parameter; evaluating
    the input profile there matches the curve's curvature away from the
    sliver arcs.
    """

    curve: PlanarCurve
    beta_star: MoebiusParameter
    h1: CircleDiffeo
    scale: ScaleFactor
    eps_used: float
    sign_flipped: bool
    diagnostics: SynthesisDiagnostics


def winding_number(points) -> int:
    """Signed turn count of a closed loop of plane vectors around the origin.

    The loop is traversed cyclically; increments are summed as signed
    angles and must each stay below a quarter turn.
    """
    z = np.asarray(list(points), dtype=complex)
    if z.size < 3:
        raise InsufficientDensity("need at least 3 loop points")
    if np.any(z == 0):
        raise OriginOnLoop("loop passes through the origin")
    inc = np.angle(np.roll(z, -1) / z)
    if not np.all(np.isfinite(inc)):
        raise OriginOnLoop("loop passes too close to the origin")
    if np.any(np.abs(inc) >= 0.5 * math.pi):
        raise InsufficientDensity("angle increment reached a quarter turn")
    total = float(np.sum(inc))
    w = round(total / TWO_PI)
    if abs(total / TWO_PI - w) > 0.01:
        raise InsufficientDensity("winding did not settle to an integer")
    return int(w)


def _two_value_runs(k: CurvatureProfile):
    """(values, breakpoints) when k is a four-run two-value step profile."""
    if k.interp != "step":
        return None
    s = k.samples
    change = np.nonzero(s != np.roll(s, 1))[0]
    if change.size != 4:
        return None
    vals = s[change]
    if not (vals[0] == vals[2] and vals[1] == vals[3] and vals[0] != vals[1]):
        return None
    return vals.astype(float), TWO_PI * change / k.n


def error_at_beta(
    k1: CurvatureProfile, m
) -> tuple[ErrorVector, PlanarCurve, ScaleFactor]:
    """Endpoint error of k1 precomposed with the Möbius map, normalized.

    Two-value step profiles take an exact path: their breakpoints are
    pulled back through the map in closed form and the four arcs integrate
    without grid error.  Other profiles are composed through the sampled
    lift and integrated on the grid.
    """
    beta = _beta_value(m)
    runs = _two_value_runs(k1)
    if runs is not None:
        vals, bps = runs
        mapped = np.mod(np.angle(moebius_apply(-beta, np.exp(1j * bps))), TWO_PI)
        order = np.argsort(mapped)
        tm = mapped[order]
        vm = vals[order]
        lengths = np.concatenate(([tm[0]], np.diff(tm), [TWO_PI - tm[-1]]))
        values = np.concatenate(([vm[-1]], vm))
        total = float(np.sum(values * lengths))
        c = TWO_PI / total
        curve = integrate_arcs(c * values, lengths, max_step=TWO_PI / k1.n)
        return error_vector(curve), curve, ScaleFactor(c)
    lift = moebius_lift(beta, n=k1.n)
    k2 = compose(k1, lift)
    k3, sc = normalize_total(k2)
    curve = integrate_curve(k3)
    return error_vector(curve), curve, sc


class _EdgeZero(Exception):
    pass


def _refine_arc(err, z0, z1, u0, e0, u1, e1, depth):
    if abs(e0) < ZERO_ON_EDGE or abs(e1) < ZERO_ON_EDGE:
        raise _EdgeZero
    if abs(cmath.phase(e1 / e0)) < 0.5 * math.pi - 0.01:
        return [e1]
    if depth >= 44 or (u1 - u0) < 1e-13:
        raise _EdgeZero
    um = 0.5 * (u0 + u1)
    em = err(z0 + (z1 - z0) * um)
    return (_refine_arc(err, z0, z1, u0, e0, um, em, depth + 1)
            + _refine_arc(err, z0, z1, um, em, u1, e1, depth + 1))


def _boundary_winding(err, center: complex, half: float, per_edge: int = 5) -> int:
    """Winding of the error along a square cell boundary, sampled adaptively."""
    corners = [center + half * w for w in (-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j)]
    corner_vals = [err(z) for z in corners]
    loop: list[complex] = []
    for i in range(4):
        z0, z1 = corners[i], corners[(i + 1) % 4]
        e_prev = corner_vals[i]
        us = np.linspace(0.0, 1.0, per_edge + 1)
        vals = [e_prev] + [err(z0 + (z1 - z0) * u) for u in us[1:-1]] \
            + [corner_vals[(i + 1) % 4]]
        loop.append(e_prev)
        for j in range(per_edge):
            seg = _refine_arc(err, z0, z1, us[j], vals[j], us[j + 1], vals[j + 1], 0)
            loop.extend(seg)
        loop.pop()  # the closing corner opens the next edge
    total = float(np.sum(np.angle(np.roll(np.asarray(loop), -1) / np.asarray(loop))))
    w = round(total / TWO_PI)
    if abs(total / TWO_PI - w) > 0.01:
        raise _EdgeZero
    return int(w)


def _outside_disk(center: complex, half: float, radius: float) -> bool:
    dx = max(abs(center.real) - half, 0.0)
    dy = max(abs(center.imag) - half, 0.0)
    return math.hypot(dx, dy) > radius


def _circle_winding(err, radius: float, n0: int = 64, n_max: int = 2048) -> int:
    n = n0
    while n <= n_max:
        try:
            pts = [err(radius * cmath.exp(2j * math.pi * j / n)) for j in range(n)]
            return winding_number(pts)
        except InsufficientDensity:
            n *= 2
        except OriginOnLoop:
            raise NoWindingAtRadius(f"error vanishes on the circle of radius {radius}")
    raise NoWindingAtRadius(f"error loop at radius {radius} never settled")


def _polish(err, x0: complex, tol: float, max_iter: int = 80) -> tuple[complex, float]:
    """Two-variable secant iteration with a rank-one update and damping."""
    def fvec(b):
        e = err(b)
        return np.array([e.real, e.imag]), abs(e)

    h = 1e-7
    f0, r0 = fvec(x0)
    best_x, best_r = x0, r0
    if r0 < tol:
        return x0, r0
    fx, _ = fvec(x0 + h)
    fy, _ = fvec(x0 + 1j * h)
    jac = np.column_stack(((fx - f0) / h, (fy - f0) / h))
    x, f, r = x0, f0, r0
    for _ in range(max_iter):
        try:
            dx = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            break
        xn, fn, rn = x, f, r
        step = 1.0
        for _ in range(6):
            xn = x + complex(dx[0], dx[1]) * step
            fn, rn = fvec(xn)
            if rn < r or step < 0.1:
                break
            step *= 0.5
        dxv = np.array([xn.real - x.real, xn.imag - x.imag])
        denom = float(dxv @ dxv)
        if denom > 0.0:
            jac += np.outer(fn - f - jac @ dxv, dxv) / denom
        x, f, r = xn, fn, rn
        if r < best_r:
            best_x, best_r = x, r
        if r < tol:
            return x, r
    raise PolishDiverged(best_x, best_r)


def find_zero_beta(
    k1: CurvatureProfile, r0: float, stats: dict | None = None
) -> MoebiusParameter:
    """Parameter inside the disk of radius r0 at which the error vanishes.

    Requires a nonzero error winding along |beta| = r0.  The square
    [-r0, r0]^2 is subdivided; cells outside the disk or with boundary
    winding zero are discarded, and a zero landing on a cell edge nudges
    the subdivision by 1e-12.  The surviving cell is shrunk until its
    diameter is below 1e-6 and the center is polished to a residual below
    1e-9.  The search is deterministic.
    """
    counter = stats if stats is not None else {}
    counter.setdefault("evaluations", 0)

    def err(b: complex) -> complex:
        counter["evaluations"] += 1
        return error_at_beta(k1, b)[0].e

    if _circle_winding(err, r0) == 0:
        raise NoWindingAtRadius(f"no winding at radius {r0}")

    center, half = 0.0 + 0.0j, float(r0)
    while half > CELL_HALF_MIN:
        chosen = None
        for _ in range(9):
            for quadrant in (-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j):
                child = center + 0.5 * half * quadrant
                if _outside_disk(child, 0.5 * half, r0):
                    continue
                try:
                    if _boundary_winding(err, child, 0.5 * half) != 0:
                        chosen = child
                        break
                except _EdgeZero:
                    chosen = None
                    break
            if chosen is not None:
                break
            center += 1.3e-12 + 0.7e-12j
        if chosen is None:
            break  # zero pinned against an edge; polish from here
        center, half = chosen, 0.5 * half

    beta, _residual = _polish(err, center, RESIDUAL_TOL)
    return MoebiusParameter(beta)


def _reparameterize(curve: PlanarCurve, h1: CircleDiffeo, beta: complex) -> np.ndarray:
    lift = moebius_lift(beta, n=curve.s.size - 1)
    return np.mod(np.asarray(h1(lift(curve.s))), TWO_PI)


def synthesize(
    k: CurvatureProfile,
    eps0: float = 0.1,
    r0: float = 0.2,
    max_rounds: int = 20,
) -> SynthesisResult:
    """Build a closed simple curve whose curvature at parameter t is k(t).

    A nonzero constant profile returns a circle of the matching radius
    directly.  Otherwise the profile (negated and reflected when only its
    negation admits a positive value window) is warped close to a two-value
    step function, the winding argument closes the curve at some Möbius
    parameter, and the curve is scaled and tagged with the original
    parameter.  The schedule halves eps each failed round and also halves
    the search radius when the winding check fails.

    The grid must resolve the warp's sliver arcs for the final curvature
    check to pass; profiles coarser than about 2048 samples fail the
    schedule at the default eps0.  Step-interpolated input is realized
    through its continuous piecewise-linear envelope.
    """
    if k.interp == "step":
        k = CurvatureProfile(k.samples, "linear")
    peak = float(np.max(np.abs(k.samples)))
    spread = float(np.max(k.samples) - np.min(k.samples))
    if spread <= 1e-9 * max(1.0, peak):
        value = float(np.mean(k.samples))
        if abs(value) < 1e-8:
            raise HypothesisViolated("constant zero profile has no realization")
        unit = CurvatureProfile(np.full(k.n, math.copysign(1.0, value)), "linear")
        circle = integrate_curve(unit)
        tags = circle.s.copy()
        curve = replace(scale_curve(circle, ScaleFactor(1.0 / abs(value))), t=tags)
        diag = SynthesisDiagnostics(
            final_error=abs(circle.pos[-1] - circle.pos[0]),
            position_distance=0.0, angle_distance=0.0, rounds=0,
            error_evaluations=0)
        return SynthesisResult(curve, MoebiusParameter(0.0), CircleDiffeo.identity(),
                               ScaleFactor(1.0 / abs(value)), 0.0, False, diag)

    abab = find_abab_points(k)
    flipped = abab.sign_flipped
    work = k
    if flipped:
        # realize -k(2*pi - t); reversing the finished curve then yields k(t)
        work = reflect_negate(k)
        abab = find_abab_points(work)
        if abab.sign_flipped:
            raise RuntimeError("window search flipped twice")

    step = StepSpec(abab.a, abab.b)
    k0 = profile_from_step(step, n=k.n)
    ref_curve = integrate_curve(normalize_total(k0)[0])
    tol_kappa = 0.05 * (abab.b - abab.a)

    eps, radius = float(eps0), float(r0)
    history: list[tuple[int, float, float, str]] = []
    stats = {"evaluations": 0}
    for round_no in range(1, max_rounds + 1):
        try:
            h1 = build_h1(work, abab, step, eps)
        except ConstructionFailed as ex:
            history.append((round_no, eps, radius, f"warp construction: {ex}"))
            eps *= 0.5
            continue
        k1 = compose(work, h1)
        try:
            beta_star = find_zero_beta(k1, radius, stats=stats)
        except NoWindingAtRadius as ex:
            history.append((round_no, eps, radius, f"winding: {ex}"))
            radius *= 0.5
            eps *= 0.5
            continue
        except PolishDiverged as ex:
            history.append((round_no, eps, radius, f"polish: {ex}"))
            eps *= 0.5
            continue
        err, curve, sc = error_at_beta(k1, beta_star)
        if err.magnitude >= RESIDUAL_TOL * TWO_PI:
            history.append((round_no, eps, radius, f"closure residual {err.magnitude:.2e}"))
            eps *= 0.5
            continue
        simple, witness = is_simple(curve)
        if not simple:
            history.append((round_no, eps, radius, f"self-intersection at {witness}"))
            eps *= 0.5
            continue
        c0_dist = float(np.max(np.abs(curve.pos - ref_curve.pos)))
        c1_dist = float(np.max(np.abs(curve.theta - ref_curve.theta)))
        if c0_dist >= C1_POSITION_TOL or c1_dist >= C1_ANGLE_TOL:
            history.append((round_no, eps, radius,
                            f"reference distance {c0_dist:.3f}/{c1_dist:.3f}"))
            eps *= 0.5
            continue

        tags = _reparameterize(curve, h1, beta_star.beta)
        final = replace(scale_curve(curve, sc), t=tags)
        if flipped:
            final = reverse_curve(final)
            final = replace(final, t=np.mod(TWO_PI - final.t, TWO_PI))
        kap_hat = curvature_samples(final)
        target = np.asarray(k(final.t[: kap_hat.size]))
        bad = np.abs(kap_hat - target) >= tol_kappa
        bad_measure = float(np.mean(bad)) * TWO_PI
        if bad_measure >= eps:
            history.append((round_no, eps, radius,
                            f"curvature mismatch on measure {bad_measure:.3f}"))
            eps *= 0.5
            continue

        diag = SynthesisDiagnostics(
            final_error=err.magnitude, position_distance=c0_dist,
            angle_distance=c1_dist, rounds=round_no,
            error_evaluations=stats["evaluations"])
        return SynthesisResult(final, beta_star, h1, sc, eps, flipped, diag)

    raise SynthesisFailed(history)


def compass_demo(
    a: float, b: float, r: float, n_samples: int, n_grid: int = 2048
) -> list[tuple[MoebiusParameter, PlanarCurve, ErrorVector]]:
    """Error vectors of the step curve precomposed around a parameter circle.

    Returns one (parameter, open curve, error) triple per sample and checks
    that the error loop winds exactly once around the origin.
    """
    if not (0.0 < a < b):
        raise ValueError("need 0 < a < b")
    if not (0.0 < r < 1.0):
        raise ValueError("radius must lie in (0, 1)")
    k0 = profile_from_step(StepSpec(a, b), n=n_grid)
    out = []
    for j in range(n_samples):
        beta = MoebiusParameter(r * cmath.exp(2j * math.pi * j / n_samples))
        err, curve, _ = error_at_beta(k0, beta)
        out.append((beta, curve, err))
    w = winding_number([e.e for _, _, e in out])
    if abs(w) != 1:
        raise RuntimeError(f"error loop winding is {w}, expected a single turn")
    return out
