import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import helpers
from subspectra import (
    DegreeSequence,
    PathRatioState,
    PoleError,
    WeightedPath,
    complete_graph,
    full_spectrum,
    full_subdivision_limit,
    path_charpoly,
    path_ratio,
    path_ratio_limit,
    quotient_path_radius,
    quotient_path_radius_mp,
    spider_graph,
    spider_radius_limit,
)


def charpoly_oracle(t, x):
    """Integer/fraction recurrence, exact for exact x."""
    prev, cur = Fraction(1), Fraction(x)
    for _ in range(t - 1):
        prev, cur = cur, Fraction(x) * cur - prev
    return cur if t else Fraction(1)


class TestPathCharpoly:
    def test_small_polynomials(self):
        assert path_charpoly(2, 3.0) == 8.0            # x^2 - 1
        assert path_charpoly(3, 2.0) == 4.0            # x^3 - 2x
        assert path_charpoly(0, 5.0) == 1.0
        assert path_charpoly(1, 5.0) == 5.0

    def test_roots_are_path_eigenvalues(self):
        for k in range(1, 5):
            assert abs(path_charpoly(4, 2 * math.cos(k * math.pi / 5))) < 1e-12

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 40), st.fractions(min_value=-4, max_value=4))
    def test_matches_exact_recurrence(self, t, x):
        want = float(charpoly_oracle(t, x))
        got = path_charpoly(t, float(x))
        assert got == pytest.approx(want, rel=1e-10, abs=1e-8)

    def test_overflow_returns_scaled_pair(self):
        result = path_charpoly(1200, 3.0)
        assert isinstance(result, tuple)
        mantissa, exponent = result
        want = charpoly_oracle(1200, 3)
        got_log = math.log2(abs(mantissa)) + exponent
        want_log = math.log2(want.numerator) - math.log2(want.denominator)
        assert got_log == pytest.approx(want_log, rel=1e-12)

    def test_rejects_negative_t(self):
        with pytest.raises(ValueError):
            path_charpoly(-1, 2.0)


class TestPathRatio:
    def test_first_ratio_is_reciprocal(self):
        for x in (2.5, 3.0, 7.0):
            assert path_ratio(1, x) == 1.0 / x

    def test_consistency_with_charpoly(self):
        for x in (2.2, 3.0, 4.5):
            for t in range(2, 25):
                lhs = path_ratio(t, x) * path_charpoly(t, x)
                rhs = path_charpoly(t - 1, x)
                assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_converges_to_golden_value(self):
        want = (3 - math.sqrt(5)) / 2
        assert abs(path_ratio(80, 3.0) - want) < 1e-14

    def test_sixty_steps_at_two_point_five(self):
        assert abs(path_ratio(60, 2.5) - 0.5) < 1e-8

    def test_exact_strict_monotone_approach(self):
        # the ratio climbs strictly toward the limit from rho_1 = 1/x;
        # float64 cannot resolve the steps beyond t ~ 35, Fraction can
        for x in (Fraction(5, 2), Fraction(3), Fraction(4)):
            values = [path_ratio(t, x) for t in range(1, 61)]
            assert all(b > a for a, b in zip(values, values[1:]))
            assert float(values[-1]) <= path_ratio_limit(float(x)) + 1e-15

    def test_pole_reported_with_location(self):
        # x = 1 is an eigenvalue of the two-vertex path
        with pytest.raises(PoleError) as err:
            path_ratio(5, 1.0)
        assert err.value.t == 2
        with pytest.raises(PoleError):
            path_ratio(3, 0.0)

    def test_negative_regime_mirrors_positive(self):
        assert path_ratio(12, -3.0) == pytest.approx(-path_ratio(12, 3.0))

    def test_state_object_advances(self):
        state = PathRatioState(3.0)
        assert state.rho == pytest.approx(1 / 3)
        state.advance()
        assert state.t == 2
        assert state.rho == pytest.approx(path_ratio(2, 3.0))


class TestPathRatioLimit:
    def test_exact_half_at_two_point_five(self):
        assert path_ratio_limit(2.5) == 0.5

    def test_golden_value(self):
        assert path_ratio_limit(3.0) == pytest.approx(0.3819660112501051,
                                                      abs=1e-15)

    def test_continuity_near_two(self):
        # direct evaluation of the closed form at 2 + 1e-6
        assert path_ratio_limit(2.000001) == pytest.approx(0.9990005, abs=5e-7)

    def test_domain_error_at_two(self):
        with pytest.raises(ValueError):
            path_ratio_limit(2.0)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(2.000001, 50))
    def test_fixed_point_identity(self, x):
        rho = path_ratio_limit(x)
        assert abs(rho - 1.0 / (x - rho)) < 1e-13

    @settings(max_examples=30, deadline=None)
    @given(st.floats(2.05, 40))
    def test_recurrence_approaches_limit(self, x):
        # convergence slows like the squared limit ratio per step, so stay
        # a little away from 2
        assert path_ratio(200, x) == pytest.approx(path_ratio_limit(x),
                                                   abs=1e-7)


class TestSpiderLimit:
    def test_small_leg_counts_give_two(self):
        assert spider_radius_limit(1) == 2.0
        assert spider_radius_limit(2) == 2.0

    def test_three_and_four_legs(self):
        assert spider_radius_limit(3) == pytest.approx(2.1213203435596424)
        assert spider_radius_limit(4) == pytest.approx(2.309401076758503)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            spider_radius_limit(0)

    def test_limit_solves_ratio_equation(self):
        for d in range(3, 9):
            x = spider_radius_limit(d)
            assert abs(x / d - 0.5 * (x - math.sqrt(x * x - 4))) < 1e-12


class TestQuotientPath:
    def test_single_stretch_is_star_radius(self):
        assert quotient_path_radius(4, 1) == pytest.approx(2.0, abs=1e-12)

    def test_weighted_path_shape(self):
        wp = WeightedPath(3, 4)
        assert wp.n == 5
        e = wp.offdiagonal()
        assert e[0] == pytest.approx(math.sqrt(3)) and np.all(e[1:] == 1.0)

    def test_monotone_and_bounded(self):
        limit = spider_radius_limit(3)
        values = [quotient_path_radius(3, t) for t in range(1, 31)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(v < limit + 1e-12 for v in values)

    def test_equals_spider_radius(self):
        for d, t in ((3, 50), (4, 20), (5, 7)):
            spider_lam1 = full_spectrum(spider_graph(d, t)).eigenvalues[0]
            assert abs(quotient_path_radius(d, t) - spider_lam1) <= 1e-9

    def test_high_precision_strict_growth_past_float_resolution(self):
        radii = [quotient_path_radius_mp(3, t, dps=60) for t in (96, 97, 98)]
        assert radii[0] < radii[1] < radii[2]
        assert float(radii[2]) == pytest.approx(spider_radius_limit(3),
                                                abs=1e-12)

    def test_high_precision_matches_float_route(self):
        assert float(quotient_path_radius_mp(4, 12)) == pytest.approx(
            quotient_path_radius(4, 12), abs=1e-11)

    def test_rejects_small_degree(self):
        with pytest.raises(ValueError):
            quotient_path_radius(2, 5)


class TestFullSubdivisionLimit:
    def test_complete_graph_cases(self):
        ds = (3, 3, 3, 3)
        assert full_subdivision_limit(ds, 4) == pytest.approx(3 / math.sqrt(2))
        assert full_subdivision_limit(ds, 5) == 2.0

    def test_triangle_all_degrees_two(self):
        for k in (1, 2, 3, 9):
            assert full_subdivision_limit((2, 2, 2), k) == 2.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            full_subdivision_limit((), 1)
        with pytest.raises(ValueError):
            full_subdivision_limit((3, 3), 0)

    def test_degree_sequence_normalizes_and_validates(self):
        ds = DegreeSequence((1, 3, 2, 2))
        assert ds.values == (3, 2, 2, 1)
        with pytest.raises(ValueError):
            DegreeSequence((3, 2))      # odd sum
        with pytest.raises(ValueError):
            DegreeSequence((2, 0))
        g = complete_graph(4)
        assert DegreeSequence.of_graph(g).values == (3, 3, 3, 3)

    def test_matches_observed_spider_limits(self):
        # degree sequence of the 5-leaf star: one hub of degree 5
        ds = DegreeSequence((5, 1, 1, 1, 1, 1))
        assert full_subdivision_limit(ds, 1) == pytest.approx(
            spider_radius_limit(5))
        assert full_subdivision_limit(ds, 2) == 2.0
