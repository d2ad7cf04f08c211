"""Curvature functions on the circle.

Profiles are periodic real functions sampled on a uniform grid over
[0, 2*pi), interpolated either piecewise-constant ("step") or
piecewise-linear ("linear").  The module also provides circle
diffeomorphisms stored as monotone piecewise-linear lifts, two-value step
specifications, plateau-aware extrema detection, and the preprocessing
warp that makes a profile close in measure to a two-value step function.

Everything here is immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi

# |integral| below this fraction of max|kappa| * 2*pi counts as zero.
ZERO_TOTAL_REL = 1e-8


class ZeroTotalCurvature(ValueError):
    """Total curvature is too close to zero to normalize."""


class IdenticallyZero(ValueError):
    """The profile vanishes everywhere up to the configured threshold."""


class HypothesisViolated(ValueError):
    """The profile lacks two local maxima and two local minima."""


class NoPositiveWindow(ValueError):
    """Neither the profile nor its negation admits values 0 < a < b."""


class ConstructionFailed(RuntimeError):
    """A constructed warp failed its verification check."""


@dataclass(frozen=True)
class CurvatureProfile:
    """Periodic real function on [0, 2*pi), sampled on a uniform grid."""

    samples: np.ndarray
    interp: str = "linear"

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size < 8:
            raise ValueError("profile needs at least 8 samples")
        if not np.all(np.isfinite(samples)):
            raise ValueError("profile samples must be finite")
        if self.interp not in ("linear", "step"):
            raise ValueError(f"unknown interpolation mode {self.interp!r}")

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def grid(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n) / self.n

    def __call__(self, t):
        """Evaluate at parameter(s) t; evaluation is 2*pi periodic."""
        t = np.asarray(t, dtype=float)
        frac = np.mod(t, TWO_PI) / TWO_PI * self.n
        if self.interp == "step":
            # nudge keeps grid-aligned arguments on their own cell
            idx = np.floor(frac + 1e-9).astype(int) % self.n
            out = self.samples[idx]
        else:
            i0 = np.floor(frac).astype(int)
            w = frac - np.floor(frac)
            # snap to the grid so sampling at grid points is exact
            hi = w > 1.0 - 1e-9
            i0 = np.where(hi, i0 + 1, i0) % self.n
            w = np.where(hi | (w < 1e-9), 0.0, w)
            out = (1.0 - w) * self.samples[i0] + w * self.samples[(i0 + 1) % self.n]
        return out if out.ndim else float(out)


def profile_from_function(fn: Callable, n: int = 4096, interp: str = "linear") -> CurvatureProfile:
    """Sample a vectorized callable on the uniform grid."""
    grid = TWO_PI * np.arange(n) / n
    return CurvatureProfile(np.asarray(fn(grid), dtype=float), interp)


@dataclass(frozen=True)
class StepSpec:
    """Two-value step function: values a, b, a, b on four consecutive arcs."""

    a: float
    b: float
    breakpoints: tuple = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)

    def __post_init__(self):
        if not (0.0 < self.a < self.b):
            raise ValueError("step values must satisfy 0 < a < b")
        bps = tuple(float(t) for t in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) != 4:
            raise ValueError("exactly four breakpoints required")
        if any(not (0.0 <= t < TWO_PI) for t in bps):
            raise ValueError("breakpoints must lie in [0, 2*pi)")
        if any(bps[i] >= bps[i + 1] for i in range(3)):
            raise ValueError("breakpoints must be strictly increasing")

    def value_at(self, t):
        """Step value at parameter(s) t (arcs are closed on the left)."""
        t = np.mod(np.asarray(t, dtype=float), TWO_PI)
        idx = np.searchsorted(self.breakpoints, t + 1e-12, side="right") - 1
        idx = np.where(idx < 0, 3, idx)
        out = np.where(idx % 2 == 0, self.a, self.b)
        return out if out.ndim else float(out)

    def arc_values_lengths(self) -> tuple[np.ndarray, np.ndarray]:
        """(values, lengths) of the four arcs, cut at the first breakpoint."""
        bps = np.asarray(self.breakpoints)
        lengths = np.diff(np.append(bps, bps[0] + TWO_PI))
        values = np.array([self.a, self.b, self.a, self.b])
        return values, lengths


def profile_from_step(spec: StepSpec, n: int = 4096) -> CurvatureProfile:
    grid = TWO_PI * np.arange(n) / n
    return CurvatureProfile(spec.value_at(grid), "step")


@dataclass(frozen=True)
class CircleDiffeo:
    """Orientation-preserving circle diffeomorphism stored as a monotone lift.

    ``knots`` and ``values`` are strictly increasing piecewise-linear lift
    samples spanning exactly one period each.  Evaluation extends to all
    reals by the degree-one rule f(t + 2*pi) = f(t) + 2*pi.
    """

    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        if knots.ndim != 1 or knots.size < 2 or knots.shape != values.shape:
            raise ValueError("knots and values must be matching 1-d arrays")
        if not (np.all(np.diff(knots) > 0) and np.all(np.diff(values) > 0)):
            raise ValueError("lift must be strictly increasing")
        if abs((knots[-1] - knots[0]) - TWO_PI) > 1e-9:
            raise ValueError("knots must span one period")
        if abs((values[-1] - values[0]) - TWO_PI) > 1e-9:
            raise ValueError("lift must have degree one")

    @classmethod
    def identity(cls) -> "CircleDiffeo":
        return cls(np.array([0.0, TWO_PI]), np.array([0.0, TWO_PI]))

    @classmethod
    def rotation(cls, phi: float) -> "CircleDiffeo":
        return cls(np.array([0.0, TWO_PI]), np.array([phi, phi + TWO_PI]))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        span = self.knots[-1] - self.knots[0]
        vspan = self.values[-1] - self.values[0]
        wind = np.floor((t - self.knots[0]) / span)
        tr = t - span * wind
        out = np.interp(tr, self.knots, self.values) + vspan * wind
        return out if out.ndim else float(out)

    def inverse(self) -> "CircleDiffeo":
        """Exact inverse: a piecewise-linear lift with axes swapped."""
        return CircleDiffeo(self.values, self.knots)


@dataclass(frozen=True)
class ScaleFactor:
    c: float

    def __post_init__(self):
        if not math.isfinite(self.c) or self.c == 0.0:
            raise ValueError("scale factor must be finite and nonzero")


class Plateau(NamedTuple):
    """Cyclic run of near-equal samples that is a strict local extremum."""

    start: int
    length: int
    kind: str  # "max" or "min"
    value: float


class AbabPoints(NamedTuple):
    """Window values 0 < a < b and four parameters attaining a, b, a, b."""

    a: float
    b: float
    params: tuple
    sign_flipped: bool


def total_curvature(k: CurvatureProfile) -> float:
    """Integral over one period.

    For a uniform periodic grid both interpolation rules integrate to the
    sample mean times 2*pi, exactly so for piecewise-constant profiles.
    """
    return float(np.mean(k.samples) * TWO_PI)


def normalize_total(k: CurvatureProfile) -> tuple[CurvatureProfile, ScaleFactor]:
    """Rescale so the total curvature equals 2*pi."""
    total = total_curvature(k)
    peak = float(np.max(np.abs(k.samples)))
    if abs(total) < ZERO_TOTAL_REL * peak * TWO_PI:
        raise ZeroTotalCurvature(f"total curvature {total:.3e} below threshold")
    c = TWO_PI / total
    return CurvatureProfile(c * k.samples, k.interp), ScaleFactor(c)


def make_integral_nonzero(
    k: CurvatureProfile, squeeze: float = 0.1
) -> tuple[CurvatureProfile, CircleDiffeo]:
    """Precompose with a warp so the total curvature is nonzero.

    When the integral already clears the zero threshold the identity is
    returned.  Otherwise most of the domain is mapped onto a neighbourhood
    of the strongest sample, so that sign dominates the integral.
    """
    peak = float(np.max(np.abs(k.samples)))
    if peak < 1e-12:
        raise IdenticallyZero("profile is zero everywhere")
    total = total_curvature(k)
    if abs(total) >= ZERO_TOTAL_REL * peak * TWO_PI:
        return k, CircleDiffeo.identity()

    samples = k.samples
    j_star = int(np.argmax(np.abs(samples)))
    sign = 1.0 if samples[j_star] > 0 else -1.0
    strong = sign * samples > 0.5 * peak

    # maximal contiguous run (cyclically) of strong samples around j_star
    n = k.n
    lo = j_star
    while strong[(lo - 1) % n] and (j_star - lo) < n - 1:
        lo -= 1
    hi = j_star
    while strong[(hi + 1) % n] and (hi - j_star) < n - 1:
        hi += 1
    u0 = TWO_PI * lo / n
    u1 = TWO_PI * (hi + 1) / n

    lam = squeeze
    for _ in range(8):
        d = CircleDiffeo(
            np.array([0.0, (1.0 - lam) * TWO_PI, TWO_PI]),
            np.array([u0, u1, u0 + TWO_PI]),
        )
        warped = compose(k, d)
        if abs(total_curvature(warped)) >= ZERO_TOTAL_REL * peak * TWO_PI:
            return warped, d
        lam *= 0.5
    raise ConstructionFailed("could not make the integral nonzero")


def compose(k: CurvatureProfile, d: CircleDiffeo) -> CurvatureProfile:
    """Pointwise k(d(t)), resampled on k's uniform grid."""
    return CurvatureProfile(np.asarray(k(d(k.grid)), dtype=float), k.interp)


def plateau_extrema(values, tol: float = 1e-9) -> list[Plateau]:
    """Strict local extrema of a cyclic sequence after collapsing plateaus.

    Consecutive entries within ``tol`` of the running plateau mean are
    grouped; a plateau is reported iff its value is strictly above (max) or
    strictly below (min) both neighbouring plateau values.  ``start`` is the
    first index of the run and the run may wrap past the end.  A constant
    sequence yields an empty list.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    starts: list[int] = []
    sums: list[float] = []
    counts: list[int] = []
    for j in range(n):
        if starts and abs(v[j] - sums[-1] / counts[-1]) <= tol:
            sums[-1] += v[j]
            counts[-1] += 1
        else:
            starts.append(j)
            sums.append(v[j])
            counts.append(1)
    means = [s / c for s, c in zip(sums, counts)]
    if len(starts) > 1 and abs(means[0] - means[-1]) <= tol:
        # cyclic wrap: the first group continues the last one
        starts[0] = starts[-1]
        counts[0] += counts[-1]
        sums[0] += sums[-1]
        means[0] = sums[0] / counts[0]
        del starts[-1], sums[-1], counts[-1], means[-1]
    m = len(starts)
    if m < 2:
        return []
    out = []
    for g in range(m):
        prev = means[(g - 1) % m]
        nxt = means[(g + 1) % m]
        if means[g] > prev and means[g] > nxt:
            kind = "max"
        elif means[g] < prev and means[g] < nxt:
            kind = "min"
        else:
            continue
        out.append(Plateau(starts[g], counts[g], kind, means[g]))
    return out


def local_extrema(
    k: CurvatureProfile, plateau_tol: float = 1e-9
) -> list[tuple[tuple[float, float], str, float]]:
    """Plateau extrema as ((t_start, t_end), kind, value) in cyclic order.

    ``t_end < t_start`` flags a plateau that wraps past 2*pi.
    """
    grid = k.grid
    out = []
    for p in plateau_extrema(k.samples, plateau_tol):
        t0 = grid[p.start]
        t1 = grid[(p.start + p.length - 1) % k.n]
        out.append(((float(t0), float(t1)), p.kind, float(p.value)))
    return out


def _cyclic_between(start: int, end: int, query: int, n: int) -> bool:
    """True when ``query`` lies strictly inside the cyclic arc start -> end."""
    return (query - start) % n < (end - start) % n and query != start


def _first_crossing(
    w: np.ndarray, j0: int, j1: int, level: float, upward: bool
) -> tuple[float, int]:
    """First grid-cell crossing of ``level`` scanning cells j0 -> j1 cyclically."""
    n = w.size
    dt = TWO_PI / n
    j = j0 % n
    for _ in range(n + 1):
        jn = (j + 1) % n
        hit = (w[j] < level <= w[jn]) if upward else (w[jn] < level <= w[j])
        if hit:
            frac = (level - w[j]) / (w[jn] - w[j])
            return (TWO_PI * j / n + frac * dt) % TWO_PI, j
        if j == j1 % n:
            break
        j = jn
    raise ConstructionFailed("level crossing not found")


def _pick_window(plateaus: list[Plateau], samples: np.ndarray):
    """Window values and crossing parameters, or None if no positive window."""
    n = samples.size
    maxima = [p for p in plateaus if p.kind == "max"]
    minima = [p for p in plateaus if p.kind == "min"]
    if len(maxima) < 2 or len(minima) < 2:
        return None
    top = sorted(maxima, key=lambda p: -p.value)[:2]
    ma, mb = sorted(top, key=lambda p: p.start)
    arc1 = [p for p in minima if _cyclic_between(ma.start, mb.start, p.start, n)]
    arc2 = [p for p in minima if _cyclic_between(mb.start, ma.start, p.start, n)]
    if not arc1 or not arc2:
        return None
    m1 = min(arc1, key=lambda p: p.value)
    m2 = min(arc2, key=lambda p: p.value)
    hi = min(ma.value, mb.value)
    lo = max(max(m1.value, m2.value), 0.0)
    if hi - lo <= 0.0:
        return None
    delta = (hi - lo) / 10.0
    a, b = lo + delta, hi - delta

    def end(p: Plateau) -> int:
        # scanning starts at the plateau's last sample so that a crossing
        # within the very next cell (a step jump) is not missed
        return (p.start + p.length - 1) % n

    p1, j_a = _first_crossing(samples, end(m2), ma.start, a, upward=True)
    p2, _ = _first_crossing(samples, j_a, ma.start, b, upward=True)
    p3, _ = _first_crossing(samples, end(ma), m1.start, a, upward=False)
    p4, _ = _first_crossing(samples, end(m1), mb.start, b, upward=True)
    return a, b, (p1, p2, p3, p4)


def find_abab_points(k: CurvatureProfile, plateau_tol: float = 1e-9) -> AbabPoints:
    """Find 0 < a < b attained in the pattern a, b, a, b around the circle.

    The window is cut from the two largest interleaved maxima and the two
    smallest interleaved minima, shaved by a tenth of its height and clamped
    to positive values.  When the profile itself admits no positive window
    but its negation does, the search runs on the negation and
    ``sign_flipped`` is set.
    """
    plateaus = plateau_extrema(k.samples, plateau_tol)
    n_max = sum(1 for p in plateaus if p.kind == "max")
    n_min = sum(1 for p in plateaus if p.kind == "min")
    if n_max < 2 or n_min < 2:
        raise HypothesisViolated(
            f"need two maxima and two minima, found {n_max} and {n_min}"
        )
    win = _pick_window(plateaus, k.samples)
    if win is not None:
        a, b, params = win
        return AbabPoints(a, b, params, False)
    neg = [Plateau(p.start, p.length, "min" if p.kind == "max" else "max", -p.value)
           for p in plateaus]
    win = _pick_window(neg, -k.samples)
    if win is None:
        raise NoPositiveWindow("no positive value window for the profile or its negation")
    a, b, params = win
    return AbabPoints(a, b, params, True)


def _unwrap_cyclic(params) -> np.ndarray:
    """Lift four cyclically ordered circle parameters to an increasing sequence."""
    u = [float(params[0])]
    for p in params[1:]:
        gap = (float(p) - u[-1]) % TWO_PI
        u.append(u[-1] + gap)
    if u[-1] - u[0] >= TWO_PI:
        raise ValueError("parameters are not in cyclic order")
    return np.array(u)


def build_h1(
    k: CurvatureProfile,
    abab: AbabPoints,
    step: StepSpec,
    eps: float,
    check_grid: int = 10_000,
) -> CircleDiffeo:
    """Warp so that k composed with the result is eps-close in measure to the step.

    Each step arc, except for thin slivers at its ends, is mapped onto a
    small neighbourhood of the matching window point (where k is within
    eps/8 of the arc's value); the slivers absorb the rest of k's domain.
    The measure bound

        measure{ t : |k(h1(t)) - step(t)| > eps } < eps

    is verified on a uniform grid before returning; failures retry with
    smaller neighbourhoods.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if not (math.isclose(step.a, abab.a, rel_tol=1e-9)
            and math.isclose(step.b, abab.b, rel_tol=1e-9)):
        raise ValueError("step values must match the window values")

    w = k.samples if not abab.sign_flipped else -k.samples
    kfun = CurvatureProfile(w, k.interp)
    u = _unwrap_cyclic(abab.params)
    targets = np.array([abab.a, abab.b, abab.a, abab.b])
    for i in range(4):
        if abs(float(kfun(u[i])) - targets[i]) > 1e-6:
            raise ValueError("window points do not attain the window values")

    bps = np.asarray(step.breakpoints)
    arc_len = np.diff(np.append(bps, bps[0] + TWO_PI))
    gaps = np.diff(np.append(u, u[0] + TWO_PI))

    def neighbourhood(i: int, dev_cap: float) -> float:
        delta = 0.4 * min(gaps[i - 1] if i > 0 else gaps[3], gaps[i])
        probe = np.linspace(-1.0, 1.0, 201)
        while delta > 1e-11:
            dev = np.max(np.abs(np.asarray(kfun(u[i] + delta * probe)) - targets[i]))
            if dev <= dev_cap:
                return delta
            delta *= 0.6
        return 1e-11

    sliver = min(eps / 32.0, 0.25 * float(np.min(arc_len)))
    dev_cap = eps / 8.0
    # the verification grid must resolve the slivers it is measuring
    n_check = max(check_grid, int(256.0 * TWO_PI / eps) + 1)
    tgrid = TWO_PI * np.arange(n_check) / n_check
    step_vals = step.value_at(tgrid)
    for _ in range(6):
        deltas = np.array([neighbourhood(i, dev_cap) for i in range(4)])
        end_mid = 0.5 * ((u[3] + deltas[3]) + (u[0] + TWO_PI - deltas[0]))
        knots = [bps[0]]
        vals = [end_mid - TWO_PI]
        for i in range(4):
            knots.extend([bps[i] + sliver, bps[i] + arc_len[i] - sliver])
            vals.extend([u[i] - deltas[i], u[i] + deltas[i]])
        knots.append(bps[0] + TWO_PI)
        vals.append(end_mid)
        try:
            h1 = CircleDiffeo(np.array(knots), np.array(vals))
        except ValueError:
            sliver *= 0.5
            dev_cap *= 0.5
            continue
        bad = np.abs(np.asarray(kfun(h1(tgrid))) - step_vals) > eps
        if float(np.mean(bad)) * TWO_PI < eps:
            return h1
        sliver *= 0.5
        dev_cap *= 0.5
    raise ConstructionFailed("measure bound verification failed")


def reflect_negate(k: CurvatureProfile) -> CurvatureProfile:
    """The profile t -> -k(2*pi - t); sampled exactly on the same grid."""
    s = k.samples
    return CurvatureProfile(-np.concatenate(([s[0]], s[:0:-1])), k.interp)
