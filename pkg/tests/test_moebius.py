import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fourvertex.bicircle import (
    Configuration,
    core_defect,
    is_core,
    random_configuration,
)
from fourvertex.curvature import TWO_PI
from fourvertex.moebius import (
    MoebiusParameter,
    evaluation_inverse,
    moebius_apply,
    moebius_lift,
    moebius_on_config,
)

P0 = Configuration(1, 1j, -1, -1j)

angles = st.floats(min_value=0.0, max_value=TWO_PI)
betas = st.complex_numbers(max_magnitude=0.9, allow_nan=False, allow_infinity=False)


class TestApply:
    def test_zero_parameter_is_identity(self):
        for z in (1.0, 1j, 0.3 - 0.4j):
            assert moebius_apply(0.0, z) == z

    def test_moves_parameter_to_origin(self):
        beta = 0.3 + 0.2j
        assert abs(moebius_apply(beta, beta)) < 1e-15
        assert moebius_apply(beta, 0.0) == pytest.approx(-beta)

    def test_fixed_points_on_axis(self):
        assert moebius_apply(0.5, 1.0) == pytest.approx(1.0)
        assert moebius_apply(0.5, -1.0) == pytest.approx(-1.0)

    @settings(max_examples=200, deadline=None)
    @given(angles, betas)
    def test_preserves_unit_circle(self, phi, beta):
        z = cmath.exp(1j * phi)
        assert abs(abs(moebius_apply(beta, z)) - 1.0) < 1e-14

    @settings(max_examples=200, deadline=None)
    @given(angles, angles, betas)
    def test_intertwines_with_rotations(self, phi, psi, beta):
        rot = cmath.exp(1j * phi)
        z = cmath.exp(1j * psi)
        left = moebius_apply(rot * beta, rot * z)
        right = rot * moebius_apply(beta, z)
        assert abs(left - right) < 1e-12

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            MoebiusParameter(1.0)
        with pytest.raises(ValueError):
            moebius_apply(1.2, 0.5)


class TestOnConfig:
    def test_identity(self):
        q = moebius_on_config(0.0, P0)
        assert q.points() == P0.points()

    def test_order_preserved(self):
        q = moebius_on_config(0.3, P0)  # constructor validates ccw order
        assert all(abs(abs(p) - 1) < 1e-12 for p in q.points())

    def test_lift_matches_direct_values(self):
        beta = 0.4 - 0.1j
        lift = moebius_lift(beta, n=512)
        t = np.linspace(0.3, TWO_PI - 0.3, 50)
        direct = np.angle(moebius_apply(beta, np.exp(1j * t)))
        lifted = np.mod(np.asarray(lift(t)), TWO_PI)
        diff = np.abs(np.exp(1j * lifted) - np.exp(1j * direct))
        assert np.max(diff) < 1e-4

    def test_lift_density_guard_near_boundary(self):
        # the sample count is raised so unwrapping cannot skip a turn
        lift = moebius_lift(0.998, n=16)
        assert lift.knots.size > 16
        assert np.all(np.diff(lift.values) > 0)


class TestEvaluationInverse:
    def test_core_input_gives_zero(self):
        core, m = evaluation_inverse(P0)
        assert m.beta == 0
        assert core.points() == P0.points()

    def test_known_forward_map(self):
        beta = 0.3 + 0.2j
        q = moebius_on_config(beta, P0)
        core, m = evaluation_inverse(q)
        assert abs(m.beta - beta) < 1e-10
        assert max(abs(p - e) for p, e in zip(core.points(), P0.points())) < 1e-10

    def test_random_round_trips(self):
        rng = np.random.default_rng(21)
        for _ in range(300):
            q = random_configuration(rng)
            core, m = evaluation_inverse(q)
            assert is_core(core, 1e-9)
            back = moebius_on_config(m, core)
            assert max(abs(p - e)
                       for p, e in zip(back.points(), q.points())) < 1e-9

    def test_forward_then_inverse_recovers_parameter(self):
        from fourvertex.bicircle import random_core_configuration

        rng = np.random.default_rng(22)
        for _ in range(100):
            core = random_core_configuration(rng)
            beta = rng.uniform(0.0, 0.7) * cmath.exp(1j * rng.uniform(0, TWO_PI))
            q = moebius_on_config(beta, core)
            recovered, m = evaluation_inverse(q)
            assert abs(m.beta - beta) < 1e-10
            assert max(abs(p - e)
                       for p, e in zip(recovered.points(), core.points())) < 1e-10

    def test_core_distance_vanishes_only_at_zero(self):
        # along the disk through a fixed core configuration the core is met
        # exactly once, at the center
        radii = np.linspace(0.1, 0.9, 9)
        phases = TWO_PI * np.arange(16) / 16
        min_defect = min(
            abs(core_defect(moebius_on_config(r * cmath.exp(1j * p), P0)))
            for r in radii for p in phases)
        assert min_defect > 0.05
        assert abs(core_defect(moebius_on_config(0.0, P0))) == 0.0


def test_degenerate_geodesics_rejected():
    from fourvertex.moebius import NumericallyDegenerate, _intersect_geodesics

    with pytest.raises(NumericallyDegenerate):
        _intersect_geodesics(("line", 1.0 + 0j), ("line", -1.0 + 0j))
    # a configuration whose two geodesics are nearly the same diameter
    eps = 1e-8
    q = Configuration(1, cmath.exp(1j * eps), -1, -cmath.exp(1j * eps))
    with pytest.raises(NumericallyDegenerate):
        evaluation_inverse(q)


def test_boundary_degeneration_clusters_points():
    # near the boundary the four image points gather around at most two spots
    for phase in (0.0, 0.7, 2.2, 4.0):
        beta = 0.999 * cmath.exp(1j * phase)
        img = moebius_on_config(beta, P0)
        ang = np.sort(np.angle(np.asarray(img.points())))
        gaps = np.sort(np.diff(np.concatenate((ang, [ang[0] + TWO_PI]))))
        assert gaps[-1] + gaps[-2] > TWO_PI - 0.4
