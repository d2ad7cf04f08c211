"""Plane curves from curvature.

Curves are arc-length-parameterized polylines with a continuous
tangent-angle lift.  Integration advances through exact circular arcs, one
per grid step, so step-function curvature is reproduced without quadrature
drift.  All operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .curvature import TWO_PI, CurvatureProfile, ScaleFactor

STRAIGHT_KAPPA = 1e-14  # below this a step is a straight segment
CLOSURE_REL = 1e-9      # endpoint gap below this fraction of length closes a curve


class TooFewSamples(ValueError):
    """Curve has too few samples for the requested operation."""


@dataclass(frozen=True)
class PlanarCurve:
    """Polyline with arc length, complex positions and tangent-angle lift.

    ``t`` optionally tags each sample with the parameter of an underlying
    curvature function (used by synthesized and fixture curves).
    """

    s: np.ndarray
    pos: np.ndarray
    theta: np.ndarray
    closed: bool = False
    scale: float = 1.0
    t: np.ndarray | None = None

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        pos = np.asarray(self.pos, dtype=complex)
        theta = np.asarray(self.theta, dtype=float)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "theta", theta)
        if self.t is not None:
            object.__setattr__(self, "t", np.asarray(self.t, dtype=float))
        if not (s.shape == pos.shape == theta.shape) or s.ndim != 1 or s.size < 2:
            raise ValueError("s, pos and theta must be matching 1-d arrays")
        ds = np.diff(s)
        if s[0] != 0.0 or not np.all(ds > 0):
            raise ValueError("arc length must increase strictly from 0")
        if np.any(np.abs(np.diff(pos)) > ds * 1.05):
            raise ValueError("chord length exceeds arc step")
        if np.any(np.abs(np.diff(theta)) >= math.pi):
            raise ValueError("tangent angle lift has a jump")

    @property
    def length(self) -> float:
        return float(self.s[-1])

    def endpoint_gap(self) -> float:
        return float(abs(self.pos[-1] - self.pos[0]))


@dataclass(frozen=True)
class ErrorVector:
    """Displacement between a curve's endpoint and its start point."""

    e: complex

    @property
    def magnitude(self) -> float:
        return abs(self.e)


def _integrate(kappa: np.ndarray, ds: np.ndarray, t: np.ndarray | None = None) -> PlanarCurve:
    theta = np.empty(kappa.size + 1)
    theta[0] = 0.0
    np.cumsum(kappa * ds, out=theta[1:])
    rot0 = np.exp(1j * theta[:-1])
    rot1 = np.exp(1j * theta[1:])
    arcs = np.empty(kappa.size, dtype=complex)
    np.divide(rot1 - rot0, 1j * kappa, out=arcs,
              where=np.abs(kappa) >= STRAIGHT_KAPPA)
    straight = np.abs(kappa) < STRAIGHT_KAPPA
    if np.any(straight):
        arcs[straight] = (ds * rot0)[straight]
    pos = np.empty(kappa.size + 1, dtype=complex)
    pos[0] = 0.0
    np.cumsum(arcs, out=pos[1:])
    s = np.empty(kappa.size + 1)
    s[0] = 0.0
    np.cumsum(ds, out=s[1:])
    closed = abs(pos[-1] - pos[0]) < CLOSURE_REL * s[-1]
    return PlanarCurve(s=s, pos=pos, theta=theta, closed=closed, t=t)


def integrate_curve(k: CurvatureProfile) -> PlanarCurve:
    """Curve starting at the origin heading along +x with curvature k(s).

    Within each grid step the curvature is held at the step's left sample
    and the position advances along the exact circular arc, so a
    grid-aligned step profile integrates without modeling error.
    """
    n = k.n
    ds = np.full(n, TWO_PI / n)
    return _integrate(k.samples, ds, t=None)


def integrate_arcs(curvatures, lengths, max_step: float = 3e-3) -> PlanarCurve:
    """Curve from consecutive circular arcs of given curvatures and lengths.

    Arcs are subdivided to ``max_step`` so the polyline is usable for
    geometric queries; subdivision does not change the endpoint because the
    per-step displacements telescope exactly.
    """
    kap_parts = []
    ds_parts = []
    for kap, ell in zip(curvatures, lengths):
        if ell < 0:
            raise ValueError("arc lengths must be nonnegative")
        if ell == 0.0:
            continue
        m = max(1, int(math.ceil(ell / max_step)))
        kap_parts.append(np.full(m, float(kap)))
        ds_parts.append(np.full(m, ell / m))
    if not kap_parts:
        raise ValueError("no arcs to integrate")
    return _integrate(np.concatenate(kap_parts), np.concatenate(ds_parts))


def error_vector(c: PlanarCurve) -> ErrorVector:
    """Final position minus initial position."""
    return ErrorVector(complex(c.pos[-1] - c.pos[0]))


def scale_curve(c: PlanarCurve, f: ScaleFactor) -> PlanarCurve:
    """Scale positions by f.c; curvature scales by the reciprocal.

    Negative factors rotate the curve half a turn; traversal orientation is
    unchanged either way.
    """
    factor = f.c
    theta = c.theta + (math.pi if factor < 0 else 0.0)
    return replace(c, s=c.s * abs(factor), pos=c.pos * factor, theta=theta,
                   scale=c.scale * factor)


def reverse_curve(c: PlanarCurve) -> PlanarCurve:
    """Traverse the curve backwards; signed curvature flips sign."""
    s = c.s[-1] - c.s[::-1]
    t = None if c.t is None else c.t[::-1].copy()
    return replace(c, s=s, pos=c.pos[::-1].copy(),
                   theta=c.theta[::-1] + math.pi, t=t)


def _ring(c: PlanarCurve) -> tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    """Samples with any duplicated closing sample dropped."""
    closed = c.closed or c.endpoint_gap() < 1e-6 * c.length
    if closed and abs(c.pos[-1] - c.pos[0]) < 1e-3 * c.length:
        return c.s[:-1], c.pos[:-1], c.theta[:-1], True
    return c.s, c.pos, c.theta, closed


def curvature_samples(c: PlanarCurve) -> np.ndarray:
    """Discrete curvature d(theta)/d(s) at each sample by central differences.

    Closed curves wrap cyclically using the lift's total turning; open
    curves fall back to one-sided differences at the ends.
    """
    s, _, theta, closed = _ring(c)
    m = s.size
    if m < 5:
        raise TooFewSamples("need at least 5 samples")
    if closed:
        period_s = c.s[-1]
        period_theta = c.theta[-1] - c.theta[0]
        s_ext = np.concatenate(([s[-1] - period_s], s, [s[0] + period_s]))
        th_ext = np.concatenate(([theta[-1] - period_theta], theta,
                                 [theta[0] + period_theta]))
        return (th_ext[2:] - th_ext[:-2]) / (s_ext[2:] - s_ext[:-2])
    out = np.empty(m)
    out[1:-1] = (theta[2:] - theta[:-2]) / (s[2:] - s[:-2])
    out[0] = (theta[1] - theta[0]) / (s[1] - s[0])
    out[-1] = (theta[-1] - theta[-2]) / (s[-1] - s[-2])
    return out


def estimate_curvature(c: PlanarCurve) -> CurvatureProfile:
    """Curvature profile recovered from the polyline.

    Non-uniform arc-length grids are resampled periodically onto the
    uniform profile grid.
    """
    s, _, _, closed = _ring(c)
    if s.size < 64:
        raise TooFewSamples("need at least 64 samples")
    values = curvature_samples(c)
    ds = np.diff(s)
    if np.max(ds) - np.min(ds) < 1e-9 * np.mean(ds):
        return CurvatureProfile(values, "linear")
    if not closed:
        raise ValueError("cannot resample an open non-uniform curve")
    period = c.s[-1]
    target = period * np.arange(s.size) / s.size
    resampled = np.interp(target, s, values, period=period)
    return CurvatureProfile(resampled, "linear")


def _orient(a: complex, b: complex, c: complex) -> float:
    return (b.real - a.real) * (c.imag - a.imag) - (b.imag - a.imag) * (c.real - a.real)


def _segments_cross(p: complex, q: complex, r: complex, w: complex) -> bool:
    o1 = _orient(p, q, r)
    o2 = _orient(p, q, w)
    o3 = _orient(r, w, p)
    o4 = _orient(r, w, q)
    if (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0) and o1 != 0 and o2 != 0 \
            and o3 != 0 and o4 != 0:
        return True

    def on_seg(a, b, x):
        return (min(a.real, b.real) <= x.real <= max(a.real, b.real)
                and min(a.imag, b.imag) <= x.imag <= max(a.imag, b.imag))

    if o1 == 0 and on_seg(p, q, r):
        return True
    if o2 == 0 and on_seg(p, q, w):
        return True
    if o3 == 0 and on_seg(r, w, p):
        return True
    if o4 == 0 and on_seg(r, w, q):
        return True
    return False


def is_simple(c: PlanarCurve) -> tuple[bool, tuple[int, int] | None]:
    """Check that no two non-adjacent polyline segments intersect.

    Sweeps segments by their minimum x, keeping an active set pruned by
    maximum x, and decides candidate pairs with orientation predicates on
    the coordinates.  Returns (flag, witness) where the witness is a pair
    of intersecting segment indices, or None.
    """
    _, pos, _, closed = _ring(c)
    m = pos.size
    if closed:
        a = pos
        b = np.roll(pos, -1)
        nseg = m
    else:
        a = pos[:-1]
        b = pos[1:]
        nseg = m - 1

    minx = np.minimum(a.real, b.real)
    maxx = np.maximum(a.real, b.real)
    miny = np.minimum(a.imag, b.imag)
    maxy = np.maximum(a.imag, b.imag)
    order = np.argsort(minx, kind="stable")

    def adjacent(i: int, j: int) -> bool:
        d = abs(i - j)
        return d <= 1 or (closed and d == nseg - 1)

    active: list[int] = []
    for idx in order:
        idx = int(idx)
        x0 = minx[idx]
        if active:
            act = np.array(active)
            keep = maxx[act] >= x0
            active = [int(v) for v in act[keep]]
            cand = act[keep]
            hit = (minx[cand] <= maxx[idx]) & (miny[cand] <= maxy[idx]) \
                & (maxy[cand] >= miny[idx])
            for j in cand[hit]:
                j = int(j)
                if adjacent(idx, j):
                    continue
                if _segments_cross(a[idx], b[idx], a[j], b[j]):
                    return False, (min(idx, j), max(idx, j))
        active.append(idx)

    # adjacent segments may only meet at their shared endpoint
    for i in range(nseg if closed else nseg - 1):
        j = (i + 1) % nseg
        if _orient(a[i], b[i], b[j]) == 0.0:
            back = (b[j] - a[j]).real * (a[i] - a[j]).real \
                + (b[j] - a[j]).imag * (a[i] - a[j]).imag
            if back > 0:
                return False, (i, j)
    return True, None
