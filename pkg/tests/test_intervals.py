import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minktube.errors import DomainError, ResolutionError
from minktube.intervals import (
    IntervalUnion,
    a_string,
    alpha_orbit,
    cantor_cover,
    cantor_level_for,
    make_intervals,
    make_points,
    tube_measure_1d,
)
from oracles import naive_tube_measure

finite_reals = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)


@st.composite
def interval_lists(draw):
    n = draw(st.integers(min_value=1, max_value=30))
    pairs = []
    for _ in range(n):
        a = draw(finite_reals)
        w = draw(st.floats(min_value=0.0, max_value=100.0, allow_nan=False))
        pairs.append((a, a + w))
    return pairs


# Conditioning of total_length degrades as |endpoint|/width grows, so the
# relative-tolerance covariance properties use moderate offsets.
moderate_reals = st.floats(
    min_value=-100.0, max_value=100.0, allow_nan=False, allow_infinity=False
)


@st.composite
def moderate_interval_lists(draw):
    n = draw(st.integers(min_value=1, max_value=30))
    pairs = []
    for _ in range(n):
        a = draw(moderate_reals)
        w = draw(st.floats(min_value=0.0, max_value=10.0, allow_nan=False))
        pairs.append((a, a + w))
    return pairs


class TestConstruction:
    def test_make_points_singleton(self):
        u = make_points([0.0])
        assert u.to_pairs() == [(0.0, 0.0)]

    def test_make_points_sorts_and_dedups(self):
        u = make_points([3.0, 1.0, 1.0])
        assert u.to_pairs() == [(1.0, 1.0), (3.0, 3.0)]

    def test_make_points_three(self):
        u = make_points([0.0, 0.5, 1.0])
        assert u.to_pairs() == [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)]

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            make_points([])
        with pytest.raises(DomainError):
            make_intervals([])

    def test_bad_pairs_rejected(self):
        with pytest.raises(DomainError):
            make_intervals([(1.0, 0.0)])
        with pytest.raises(DomainError):
            make_points([float("nan")])

    def test_touching_intervals_merge(self):
        u = make_intervals([(0.0, 1.0), (1.0, 2.0), (3.0, 4.0)])
        assert u.to_pairs() == [(0.0, 2.0), (3.0, 4.0)]

    def test_overlap_and_containment_merge(self):
        u = make_intervals([(0.0, 10.0), (1.0, 2.0), (9.0, 12.0), (20.0, 21.0)])
        assert u.to_pairs() == [(0.0, 12.0), (20.0, 21.0)]

    @given(interval_lists())
    @settings(max_examples=150, deadline=None)
    def test_canonicalization_idempotent(self, pairs):
        u = IntervalUnion(pairs)
        again = IntervalUnion(u.to_pairs())
        assert u == again
        # canonical form: strict gaps
        for (a1, b1), (a2, b2) in zip(u.to_pairs(), u.to_pairs()[1:]):
            assert b1 < a2


class TestTubeMeasure:
    def test_point_is_2eps(self):
        u = make_points([0.7])
        for eps in (1.0, 0.1, 1e-8):
            assert u.tube_measure(eps) == pytest.approx(2 * eps, rel=1e-15)

    def test_segment_is_length_plus_2eps(self):
        u = make_intervals([(2.0, 5.5)])
        for eps in (1.0, 0.01):
            assert u.tube_measure(eps) == pytest.approx(3.5 + 2 * eps, rel=1e-15)

    def test_two_points_disjoint_then_merged(self):
        u = make_points([0.0, 1.0])
        assert u.tube_measure(0.25) == pytest.approx(1.0, abs=1e-15)
        assert u.tube_measure(0.6) == pytest.approx(2.2, abs=1e-15)

    def test_eps_zero_gives_total_length(self):
        u = make_intervals([(0.0, 1.0), (2.0, 2.5)])
        assert u.tube_measure(0.0) == pytest.approx(1.5)

    def test_negative_eps_rejected(self):
        with pytest.raises(DomainError):
            make_points([0.0]).tube_measure(-1e-9)

    @given(interval_lists(), st.floats(min_value=0.0, max_value=1e3))
    @settings(max_examples=200, deadline=None)
    def test_matches_naive_reference(self, pairs, eps):
        u = IntervalUnion(pairs)
        got = u.tube_measure(eps)
        want = naive_tube_measure(u.to_pairs(), eps)
        # the reference expands endpoints before differencing, so its own
        # rounding scales with the endpoint magnitudes
        scale = max(abs(u.hull_lo), abs(u.hull_hi), eps, 1.0)
        fp = 16 * np.finfo(float).eps * scale * (u.count + 1)
        assert got == pytest.approx(want, rel=1e-12, abs=fp)

    @given(interval_lists(), st.floats(min_value=1e-9, max_value=1e3),
           st.floats(min_value=1.0, max_value=10.0))
    @settings(max_examples=150, deadline=None)
    def test_monotone_and_bounded(self, pairs, eps, factor):
        u = IntervalUnion(pairs)
        m1 = u.tube_measure(eps)
        m2 = u.tube_measure(eps * factor)
        assert m1 <= m2 * (1 + 1e-12)
        assert 2 * eps <= m1 * (1 + 1e-12)
        assert m1 <= u.hull_length + 2 * eps + 1e-9 * max(1.0, u.hull_length)

    @given(interval_lists(), st.floats(min_value=1e-6, max_value=10.0),
           st.integers(min_value=-20, max_value=20))
    @settings(max_examples=100, deadline=None)
    def test_scaling_covariance_exact_for_powers_of_two(self, pairs, eps, k):
        lam = 2.0**k
        u = IntervalUnion(pairs)
        assert u.scale(lam).tube_measure(lam * eps) == lam * u.tube_measure(eps)

    @given(moderate_interval_lists(), st.floats(min_value=1e-6, max_value=10.0),
           st.floats(min_value=1e-3, max_value=1e3))
    @settings(max_examples=100, deadline=None)
    def test_scaling_covariance_general(self, pairs, eps, lam):
        u = IntervalUnion(pairs)
        got = u.scale(lam).tube_measure(lam * eps)
        assert got == pytest.approx(lam * u.tube_measure(eps), rel=1e-12)

    @given(moderate_interval_lists(), st.floats(min_value=1e-6, max_value=10.0),
           st.floats(min_value=-100.0, max_value=100.0))
    @settings(max_examples=100, deadline=None)
    def test_translation_invariance(self, pairs, eps, t):
        u = IntervalUnion(pairs)
        got = u.translate(t).tube_measure(eps)
        assert got == pytest.approx(u.tube_measure(eps), rel=1e-12, abs=1e-12)

    def test_scale_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            make_points([0.0]).scale(0.0)


class TestAString:
    def test_small_example(self):
        u = a_string(1.0, 3)
        assert u.to_pairs() == [
            (0.0, 0.0),
            (1.0 / 3.0, 1.0 / 3.0),
            (0.5, 0.5),
            (1.0, 1.0),
        ]

    def test_hull_and_count(self):
        u = a_string(2.0, 100)
        assert u.count == 101
        assert u.hull_lo == 0.0 and u.hull_hi == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            a_string(0.0, 10)
        with pytest.raises(DomainError):
            a_string(1.0, 1)


class TestAlphaOrbit:
    def test_two_iterations_by_hand(self):
        u = alpha_orbit(2.0, 0.5, 3)
        assert u.to_pairs() == [
            (0.1875, 0.1875),
            (0.25, 0.25),
            (0.5, 0.5),
        ]

    def test_orbit_decreases_and_stays_positive(self):
        u = alpha_orbit(3.0, 0.9, 1000)
        assert u.count == 1000
        assert u.lo[0] > 0.0
        assert u.notes == ()

    def test_underflow_truncates_with_note(self):
        u = alpha_orbit(1.001, 1.9e-300, 10)
        assert u.count < 10
        assert u.notes and "truncated" in u.notes[0]

    def test_domain(self):
        with pytest.raises(DomainError):
            alpha_orbit(1.0, 0.5, 10)
        with pytest.raises(DomainError):
            alpha_orbit(2.0, 1.0, 10)


class TestCantorCover:
    def test_level_zero_suffices(self):
        u = cantor_cover(0.2)
        assert u.to_pairs() == [(0.0, 1.0)]

    def test_level_one(self):
        u = cantor_cover(0.1)
        assert u.to_pairs() == pytest.approx([(0.0, 1 / 3), (2 / 3, 1.0)])

    def test_level_rule_at_1e6(self):
        # smallest k with 3^-(k+1) <= 2e-6 is k = 11
        k = cantor_level_for(1e-6)
        assert k == 11
        assert 3.0 ** -(k + 1) <= 2e-6 < 3.0**-k
        assert cantor_cover(1e-6).count == 2**11

    @pytest.mark.parametrize("eps", [1e-2, 1e-3, 1e-4])
    def test_deeper_cover_leaves_tube_measure_unchanged(self, eps):
        from minktube.intervals import cantor_cover_at_level

        k = cantor_level_for(eps)
        base = cantor_cover_at_level(k).tube_measure(eps)
        deeper = cantor_cover_at_level(k + 2).tube_measure(eps)
        assert deeper == pytest.approx(base, rel=1e-14)

    def test_depth_cap(self):
        with pytest.raises(ResolutionError):
            cantor_cover(1e-21, depth_cap=40)

    def test_domain(self):
        with pytest.raises(DomainError):
            cantor_cover(0.0)
        with pytest.raises(DomainError):
            cantor_cover(1.0)


def test_module_level_tube_measure_alias():
    u = make_points([0.0])
    assert tube_measure_1d(u, 0.5) == u.tube_measure(0.5)


def test_million_point_string_tube_is_fast_and_sane():
    u = a_string(1.0, 10**6)
    m = u.tube_measure(1e-5)
    # asymptotic law for the harmonic string: measure ~ 2*sqrt(2*eps)
    assert m == pytest.approx(2.0 * math.sqrt(2e-5), rel=5e-3)
    assert u.smallest_gap == pytest.approx(1e-12, rel=2e-6)
