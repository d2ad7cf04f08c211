"""Vertex and circumscribed-circle analysis of closed plane curves.

A vertex is a strict local extremum (plateau) of the discrete curvature.
The smallest enclosing circle of the curve's samples is computed by a
randomized incremental construction; the contact set between curve and
circle, split into point and arc components, drives the vertex-count
bounds: with n contact components the curve carries at least 2n vertices,
plus two extra for every component that is a full arc.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .curvature import TWO_PI, plateau_extrema
from .integrator import PlanarCurve, _ring, curvature_samples, is_simple


class NotSimple(ValueError):
    """The curve has a self-intersection."""


class NotClosed(ValueError):
    """The curve does not close up."""


class ConstantCurvature(ValueError):
    """Curvature has no extrema; the curve is a circle."""


class NoContact(RuntimeError):
    """No sample lies within the contact band of the enclosing circle."""


@dataclass(frozen=True)
class EnclosingCircle:
    """Smallest circle containing a point set."""

    center: complex
    radius: float

    @property
    def curvature(self) -> float:
        return 1.0 / self.radius


@dataclass(frozen=True)
class VertexReport:
    """Curvature extrema of a closed curve, in cyclic order."""

    vertices: list  # ((t_start, t_end), kind, value)
    count: int


@dataclass(frozen=True)
class ContactComponent:
    interval: tuple[float, float]
    kind: str  # "point" or "arc"
    index_start: int
    index_count: int


@dataclass(frozen=True)
class OssermanReport:
    circle: EnclosingCircle
    components: list
    n: int
    vertex_count: int
    bound_2n_satisfied: bool
    per_gap_low_points: list          # (parameter, curvature) with curvature < K
    per_component_high_points: list   # (parameter, curvature) near or above K
    bonus_vertices: int
    bonus_bound_satisfied: bool | None  # None unless every component is an arc
    contact_gap: float                  # largest angular gap of the contact set


_IN_CIRCLE_EPS = 1.0 + 1e-14


def _inside(c: tuple[complex, float], p: complex) -> bool:
    return abs(p - c[0]) <= c[1] * _IN_CIRCLE_EPS


def _diameter(a: complex, b: complex) -> tuple[complex, float]:
    center = 0.5 * (a + b)
    return center, max(abs(center - a), abs(center - b))


def _circumcircle(a: complex, b: complex, c: complex) -> tuple[complex, float] | None:
    # shift toward the bounding-box center for conditioning
    o = complex(
        0.5 * (min(a.real, b.real, c.real) + max(a.real, b.real, c.real)),
        0.5 * (min(a.imag, b.imag, c.imag) + max(a.imag, b.imag, c.imag)),
    )
    ax, ay = a.real - o.real, a.imag - o.imag
    bx, by = b.real - o.real, b.imag - o.imag
    cx, cy = c.real - o.real, c.imag - o.imag
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        return None
    x = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
         + (cx * cx + cy * cy) * (ay - by)) / d
    y = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
         + (cx * cx + cy * cy) * (bx - ax)) / d
    center = o + complex(x, y)
    return center, max(abs(center - a), abs(center - b), abs(center - c))


def _cross(p: complex, q: complex, r: complex) -> float:
    return (q.real - p.real) * (r.imag - p.imag) - (q.imag - p.imag) * (r.real - p.real)


def _mec_two_points(points, p: complex, q: complex) -> tuple[complex, float]:
    circ = _diameter(p, q)
    left = None
    right = None
    for r in points:
        if _inside(circ, r):
            continue
        cross = _cross(p, q, r)
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        if cross > 0.0 and (left is None
                            or _cross(p, q, c[0]) > _cross(p, q, left[0])):
            left = c
        elif cross < 0.0 and (right is None
                              or _cross(p, q, c[0]) < _cross(p, q, right[0])):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[1] <= right[1] else right


def _mec_one_point(points, p: complex) -> tuple[complex, float]:
    c = (p, 0.0)
    for i, q in enumerate(points):
        if not _inside(c, q):
            if c[1] == 0.0:
                c = _diameter(p, q)
            else:
                c = _mec_two_points(points[: i + 1], p, q)
    return c


def min_enclosing_circle(points, seed: int = 0) -> EnclosingCircle:
    """Smallest circle enclosing the points.

    Randomized incremental construction, expected linear time; the shuffle
    seed makes the run deterministic.  The result is verified to contain
    every input point.
    """
    pts = [complex(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    shuffled = list(pts)
    random.Random(seed).shuffle(shuffled)
    c: tuple[complex, float] | None = None
    for i, p in enumerate(shuffled):
        if c is None or not _inside(c, p):
            c = _mec_one_point(shuffled[:i], p)
    center, radius = c
    worst = max(abs(p - center) for p in pts)
    if worst > radius * (1.0 + 1e-9):
        raise RuntimeError("enclosing circle failed containment verification")
    return EnclosingCircle(center, radius)


def _params(c: PlanarCurve, ring_size: int) -> np.ndarray:
    if c.t is not None:
        return np.asarray(c.t[:ring_size], dtype=float)
    return np.asarray(c.s[:ring_size], dtype=float)


def contact_components(
    c: PlanarCurve, circle: EnclosingCircle, band: float | None = None
) -> list[ContactComponent]:
    """Maximal sample runs within ``band`` of the circle, merged cyclically.

    A run spanning fewer than two grid steps counts as a point contact,
    otherwise as an arc.  ``band`` defaults to 1e-5 of the radius.
    """
    if band is None:
        band = 1e-5 * circle.radius
    if band <= 0.0:
        raise ValueError("band must be positive")
    _, pos, _, _ = _ring(c)
    m = pos.size
    near = np.abs(np.abs(pos - circle.center) - circle.radius) < band
    if not np.any(near):
        raise NoContact("no curve sample within the contact band")
    params = _params(c, m)

    runs: list[tuple[int, int]] = []
    j = 0
    while j < m:
        if near[j]:
            j0 = j
            while j < m and near[j]:
                j += 1
            runs.append((j0, j - j0))
        else:
            j += 1
    if len(runs) > 1 and near[0] and near[m - 1]:
        first, last = runs[0], runs.pop()
        runs[0] = (last[0], last[1] + first[1])
    if len(runs) == 1 and runs[0][1] == m:
        comp = ContactComponent((float(params[0]), float(params[m - 1])), "arc", 0, m)
        return [comp]

    out = []
    for start, count in runs:
        end = (start + count - 1) % m
        kind = "point" if count <= 2 else "arc"
        out.append(ContactComponent(
            (float(params[start]), float(params[end])), kind, start, count))
    return out


def contact_angular_gap(
    c: PlanarCurve, circle: EnclosingCircle, band: float | None = None
) -> float:
    """Largest angular gap (about the center) between contact samples.

    A gap above pi would mean the contact set fits in an open half circle,
    which the smallest enclosing circle rules out.
    """
    if band is None:
        band = 1e-5 * circle.radius
    _, pos, _, _ = _ring(c)
    near = np.abs(np.abs(pos - circle.center) - circle.radius) < band
    if not np.any(near):
        raise NoContact("no curve sample within the contact band")
    ang = np.sort(np.angle(pos[near] - circle.center))
    gaps = np.diff(np.concatenate((ang, [ang[0] + TWO_PI])))
    return float(np.max(gaps))


def detect_vertices(c: PlanarCurve, plateau_tol: float = 1e-9) -> VertexReport:
    """Curvature extrema of a closed curve, plateau-collapsed.

    Raises :class:`ConstantCurvature` for circles, whose curvature has no
    extrema.
    """
    if not (c.closed or c.endpoint_gap() < 1e-6 * c.length):
        raise NotClosed("vertex detection needs a closed curve")
    values = curvature_samples(c)
    plateaus = plateau_extrema(values, plateau_tol)
    if not plateaus:
        raise ConstantCurvature("curvature has no extrema")
    params = _params(c, values.size)
    vertices = []
    for p in plateaus:
        t0 = params[p.start]
        t1 = params[(p.start + p.length - 1) % values.size]
        vertices.append(((float(t0), float(t1)), p.kind, float(p.value)))
    kinds = [v[1] for v in vertices]
    if any(kinds[i] == kinds[(i + 1) % len(kinds)] for i in range(len(kinds))):
        raise RuntimeError("vertex kinds failed to alternate")
    return VertexReport(vertices, len(vertices))


def osserman_check(
    c: PlanarCurve,
    band: float | None = None,
    plateau_tol: float = 1e-9,
    seed: int = 0,
) -> OssermanReport:
    """Vertex-count bounds against the circumscribed circle.

    Computes the smallest enclosing circle (curvature K), the contact
    components (n of them), and the vertex count, and checks the bound
    count >= 2n.  Each contact component is witnessed by a parameter of
    near-maximal curvature (allowed 2 percent below K for discretization);
    each gap between components by a parameter with curvature below K.
    Arc components add two bonus vertices each; the strengthened bound is
    checked only when every component is an arc.  Witness points are kept
    separate from vertices and never counted as such.
    """
    if not (c.closed or c.endpoint_gap() < 1e-6 * c.length):
        raise NotClosed("curve endpoints do not meet")
    ok, witness = is_simple(c)
    if not ok:
        raise NotSimple(f"curve has a self-intersection near segments {witness}")
    _, pos, _, _ = _ring(c)
    m = pos.size
    circle = min_enclosing_circle(pos, seed=seed)
    comps = contact_components(c, circle, band=band)
    gap = contact_angular_gap(c, circle, band=band)
    report = detect_vertices(c, plateau_tol)
    kappa = curvature_samples(c)
    params = _params(c, m)
    K = circle.curvature

    highs = []
    for comp in comps:
        idx = (comp.index_start + np.arange(comp.index_count)) % m
        j = idx[int(np.argmax(kappa[idx]))]
        highs.append((float(params[j]), float(kappa[j])))
    lows = []
    n = len(comps)
    for i in range(n):
        cur = comps[i]
        nxt = comps[(i + 1) % n]
        start = (cur.index_start + cur.index_count) % m
        count = (nxt.index_start - start) % m
        if count == 0:
            continue
        idx = (start + np.arange(count)) % m
        j = idx[int(np.argmin(kappa[idx]))]
        lows.append((float(params[j]), float(kappa[j])))

    bonus = 2 * sum(1 for comp in comps if comp.kind == "arc")
    all_arcs = all(comp.kind == "arc" for comp in comps)
    bonus_ok = (report.count >= 2 * n + bonus) if all_arcs else None
    return OssermanReport(
        circle=circle,
        components=comps,
        n=n,
        vertex_count=report.count,
        bound_2n_satisfied=report.count >= 2 * n,
        per_gap_low_points=lows,
        per_component_high_points=highs,
        bonus_vertices=bonus,
        bonus_bound_satisfied=bonus_ok,
        contact_gap=gap,
    )


def _closed_fixture(t, gamma, speed, theta, params=None) -> PlanarCurve:
    """Assemble a closed curve from dense parameter samples.

    ``gamma`` are complex positions, ``speed`` the parameter speed |d gamma|
    and ``theta`` the tangent-angle lift, all sampled at ``t`` including the
    duplicated endpoint.
    """
    ds = 0.5 * (speed[1:] + speed[:-1]) * np.diff(t)
    s = np.concatenate(([0.0], np.cumsum(ds)))
    tags = t if params is None else params
    return PlanarCurve(s=s, pos=gamma, theta=theta, closed=True, t=tags)


def random_convex_curve(rng, n: int = 512, harmonics: int = 5,
                        amplitude: float = 0.08) -> PlanarCurve:
    """Random smooth convex closed curve from a positive support function.

    The support function is 1 plus a low trigonometric polynomial whose
    coefficients are damped hard enough to keep the curvature radius
    positive.
    """
    t = TWO_PI * np.arange(n + 1) / n
    h = np.ones_like(t)
    hp = np.zeros_like(t)
    hpp = np.zeros_like(t)
    budget = 0.0
    coefs = []
    for k in range(2, 2 + harmonics):
        ak, bk = rng.normal(0.0, amplitude / k**2, size=2)
        coefs.append((k, ak, bk))
        budget += (k * k + 1.0) * math.hypot(ak, bk)
    if budget < 0.01:
        coefs[0] = (2, 0.02, 0.0)  # keep the curvature away from constant
        budget += 0.1
    damp = min(1.0, 0.5 / budget) if budget > 0 else 1.0
    for k, ak, bk in coefs:
        ak *= damp
        bk *= damp
        h += ak * np.cos(k * t) + bk * np.sin(k * t)
        hp += -ak * k * np.sin(k * t) + bk * k * np.cos(k * t)
        hpp += -(k * k) * (ak * np.cos(k * t) + bk * np.sin(k * t))
    rho = h + hpp  # curvature radius; positive by the damping above
    gamma = h * np.exp(1j * t) + hp * 1j * np.exp(1j * t)
    theta = t + 0.5 * math.pi
    return _closed_fixture(t, gamma, rho, theta)


def random_star_curve(rng, n: int = 512, harmonics: int = 4,
                      amplitude: float = 0.15) -> PlanarCurve:
    """Random star-shaped closed curve r(t) > 0; curvature may change sign."""
    t = TWO_PI * np.arange(n + 1) / n
    r = np.ones_like(t)
    rp = np.zeros_like(t)
    for k in range(1, 1 + harmonics):
        ak, bk = rng.normal(0.0, amplitude / (k + 1), size=2)
        r += ak * np.cos(k * t) + bk * np.sin(k * t)
        rp += -ak * k * np.sin(k * t) + bk * k * np.cos(k * t)
    if np.min(r) < 0.1:
        shift = 0.1 - float(np.min(r))
        r = r + shift
    gamma = r * np.exp(1j * t)
    dgamma = (rp + 1j * r) * np.exp(1j * t)
    speed = np.abs(dgamma)
    theta = np.unwrap(np.angle(dgamma))
    theta[-1] = theta[0] + TWO_PI
    return _closed_fixture(t, gamma, speed, theta)
