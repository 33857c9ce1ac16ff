import math

import numpy as np
import pytest

from minktube.ballvol import gamma_ball
from minktube.cloud import PointCloud, mc_tube
from minktube.errors import DataError, DomainError
from minktube.estimate import (
    VERDICT_DEGENERATE_INFINITE,
    VERDICT_DEGENERATE_ZERO,
    VERDICT_MEASURABLE,
    VERDICT_NONDEGENERATE,
    EpsSchedule,
    box_dimension_fit,
    content_estimate,
    measurability_verdict,
)
from minktube.intervals import a_string, alpha_orbit, make_intervals, make_points
from minktube.setspec import SetSpec, realize
from minktube.tube import TubeFunction, exact_tube, lift_tube

CANTOR_D = math.log(2.0) / math.log(3.0)


class TestEpsSchedule:
    def test_descending_constant_ratio(self):
        s = EpsSchedule(1e-1, 1e-5, 8)
        v = s.values
        assert v[0] == pytest.approx(1e-1) and v[-1] == pytest.approx(1e-5)
        assert np.all(np.diff(v) < 0)
        ratios = v[1:] / v[:-1]
        assert np.allclose(ratios, ratios[0], rtol=1e-12)
        assert len(s) == 33

    def test_validation(self):
        with pytest.raises(DomainError):
            EpsSchedule(1e-5, 1e-1, 8)
        with pytest.raises(DomainError):
            EpsSchedule(1e-1, 0.0, 8)
        with pytest.raises(DomainError):
            EpsSchedule(1e-1, 1e-5, 3)


class TestBoxDimensionFit:
    def test_point_fits_zero(self):
        fit = box_dimension_fit(exact_tube(make_points([0.0])), EpsSchedule(1e-1, 1e-6, 8))
        assert fit.fitted_d == pytest.approx(0.0, abs=1e-12)
        assert fit.residual < 1e-12

    def test_segment_fits_one(self):
        fit = box_dimension_fit(
            exact_tube(make_intervals([(0.0, 1.0)])), EpsSchedule(1e-3, 1e-6, 8)
        )
        assert fit.fitted_d == pytest.approx(1.0, abs=0.01)

    def test_harmonic_string_fits_half(self):
        fit = box_dimension_fit(
            exact_tube(a_string(1.0, 10**6)), EpsSchedule(1e-3, 1e-8, 8)
        )
        assert fit.fitted_d == pytest.approx(0.5, abs=0.01)

    def test_quadratic_string_fits_third(self):
        fit = box_dimension_fit(
            exact_tube(a_string(2.0, 10**6)), EpsSchedule(1e-3, 1e-8, 8)
        )
        assert fit.fitted_d == pytest.approx(1.0 / 3.0, abs=0.01)

    def test_orbit_alpha2_fits_half(self):
        fit = box_dimension_fit(
            exact_tube(alpha_orbit(2.0, 0.5, 10**6)), EpsSchedule(1e-3, 1e-7, 8)
        )
        assert fit.fitted_d == pytest.approx(0.5, abs=0.02)

    def test_orbit_alpha3_fits_two_thirds(self):
        fit = box_dimension_fit(
            exact_tube(alpha_orbit(3.0, 0.5, 10**6)), EpsSchedule(1e-3, 1e-7, 8)
        )
        assert fit.fitted_d == pytest.approx(2.0 / 3.0, abs=0.02)

    def test_fit_bounds_invariant(self):
        f = exact_tube(a_string(1.0, 1000))
        fit = box_dimension_fit(f, EpsSchedule(1e-2, 1e-4, 8))
        assert -fit.ci_halfwidth <= fit.fitted_d <= f.ambient_n + fit.ci_halfwidth

    def test_nonpositive_eval_raises_data_error(self):
        bad = TubeFunction(1, "exact_1d", lambda e: (0.0, 0.0))
        with pytest.raises(DataError) as exc:
            box_dimension_fit(bad, EpsSchedule(1e-1, 1e-3, 8))
        assert exc.value.eps is not None

    def test_noisy_stochastic_rejected(self):
        cloud = PointCloud(np.zeros((1, 2)))
        f = mc_tube(cloud, 1000, seed=1)  # ~3% stderr at p ~ pi/4
        with pytest.raises(DomainError):
            box_dimension_fit(f, EpsSchedule(1.0, 0.1, 8))


class TestContentEstimate:
    def test_point_content_exact(self):
        est = content_estimate(exact_tube(make_points([0.0])), 0.0, EpsSchedule(1e-3, 1e-11, 8))
        assert est.lower == pytest.approx(2.0, rel=1e-14)
        assert est.upper == pytest.approx(2.0, rel=1e-14)
        assert est.normalized_lower == pytest.approx(1.0, rel=1e-14)
        assert est.verdict == VERDICT_MEASURABLE

    def test_lifted_point_content_pi(self):
        lifted = lift_tube(exact_tube(make_points([0.0])), 1e-10)
        est = content_estimate(lifted, 0.0, EpsSchedule(1e-3, 1e-11, 8))
        assert est.lower == pytest.approx(math.pi, rel=1e-8)
        assert est.upper == pytest.approx(math.pi, rel=1e-8)
        assert est.normalized_midpoint == pytest.approx(1.0, rel=1e-8)
        assert est.verdict == VERDICT_MEASURABLE

    def test_cantor_oscillates_and_is_never_measurable(self):
        real = realize(SetSpec(kind="cantor"))
        est = content_estimate(real.tube, CANTOR_D, EpsSchedule(1e-1, 1e-7, 8))
        assert est.upper / est.lower > 1.01
        assert est.verdict == VERDICT_NONDEGENERATE
        # frozen oscillation extrema of the exact middle-thirds tube law
        assert est.lower == pytest.approx(2.4949757159462413, rel=1e-3)
        assert est.upper == pytest.approx(2.5830404686603904, rel=1e-3)

    def test_normalization_consistency(self):
        est = content_estimate(
            exact_tube(make_intervals([(0.0, 1.0)])), 1.0, EpsSchedule(1e-3, 1e-7, 8)
        )
        g = gamma_ball(est.ambient_n - est.s)
        assert est.normalized_lower * g == est.lower
        assert est.normalized_upper * g == est.upper

    def test_lower_le_upper_always(self):
        for s in (0.0, 0.25, 0.5, 0.75, 1.0):
            est = content_estimate(
                exact_tube(a_string(1.0, 2000)), s, EpsSchedule(1e-2, 1e-5, 8)
            )
            assert est.lower <= est.upper

    def test_scaling_law(self):
        u = a_string(1.0, 5000)
        lam = 4.0
        for s in (0.25, 0.5, 0.75):
            sched = EpsSchedule(1e-3, 1e-6, 8)
            scaled_sched = EpsSchedule(lam * 1e-3, lam * 1e-6, 8)
            base = content_estimate(exact_tube(u), s, sched)
            scaled = content_estimate(exact_tube(u.scale(lam)), s, scaled_sched)
            assert scaled.lower == pytest.approx(lam**s * base.lower, rel=1e-12)
            assert scaled.upper == pytest.approx(lam**s * base.upper, rel=1e-12)

    def test_out_of_range_s(self):
        with pytest.raises(DomainError):
            content_estimate(exact_tube(make_points([0.0])), 1.5, EpsSchedule(1e-1, 1e-3, 8))


class TestVerdicts:
    def test_segment_measurable_at_one(self):
        est = content_estimate(
            exact_tube(make_intervals([(0.0, 1.0)])), 1.0, EpsSchedule(1e-3, 1e-11, 8)
        )
        assert est.verdict == VERDICT_MEASURABLE

    def test_segment_diverges_at_half(self):
        est = content_estimate(
            exact_tube(make_intervals([(0.0, 1.0)])), 0.5, EpsSchedule(1e-3, 1e-11, 8)
        )
        assert est.verdict == VERDICT_DEGENERATE_INFINITE

    def test_coarse_schedule_gives_nondegenerate(self):
        # same segment, schedule stopping at eps = 0.1: the transient
        # dominates and the tight tolerance cannot certify measurability
        est = content_estimate(
            exact_tube(make_intervals([(0.0, 1.0)])),
            1.0,
            EpsSchedule(1.0, 0.1, 8),
            window_decades=1.0,
            measurability_rel_tol=1e-6,
        )
        assert est.verdict == VERDICT_NONDEGENERATE

    def test_exponent_sweep_guard_band(self):
        cases = [
            (exact_tube(make_points([0.0])), 0.0, EpsSchedule(1e-3, 1e-9, 8)),
            (exact_tube(make_intervals([(0.0, 1.0)])), 1.0, EpsSchedule(1e-3, 1e-9, 8)),
            (exact_tube(a_string(1.0, 10**6)), 0.5, EpsSchedule(1e-3, 1e-7, 8)),
        ]
        for f, d, sched in cases:
            if d - 0.1 >= 0.0:
                est = content_estimate(f, d - 0.1, sched)
                assert est.verdict == VERDICT_DEGENERATE_INFINITE, f.label
            if d + 0.1 <= f.ambient_n:
                est = content_estimate(f, d + 0.1, sched)
                assert est.verdict == VERDICT_DEGENERATE_ZERO, f.label

    def test_verdict_operates_on_estimate(self):
        est = content_estimate(
            exact_tube(make_points([0.0])), 0.0, EpsSchedule(1e-2, 1e-5, 8)
        )
        assert measurability_verdict(est, 0.02) == VERDICT_MEASURABLE
        with pytest.raises(DomainError):
            measurability_verdict(est, 0.0)
