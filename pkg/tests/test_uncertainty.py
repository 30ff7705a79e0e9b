import math

import numpy as np
import pytest
import scipy.integrate
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from maud.errors import (
    EstimateRangeError,
    InfeasibleFitError,
    InvalidBetaError,
    UndefinedModeError,
    UnsupportedShapeError,
)
from maud.uncertainty import (
    AttributeEstimate,
    BetaSpec,
    beta_density,
    beta_mean,
    beta_mode,
    density_curve,
    expected_single_attribute_utility,
    expected_utility_quadrature,
    expected_utility_series,
    fit_beta,
)
from maud.utility import evaluate_utility, make_exponential_utility

from conftest import make_attribute

SHAPE_GRID = [1.0, 1.5, 2.0, 3.0, 5.0, 9.0]


def unit_utility(c):
    return make_exponential_utility(make_attribute("z", 0.0, 1.0), c)


class TestBetaSpec:
    def test_validation(self):
        with pytest.raises(InvalidBetaError):
            BetaSpec(1.0, 1.0, 2.0, 2.0)
        with pytest.raises(InvalidBetaError):
            BetaSpec(0.0, 1.0, 0.8, 2.0)
        with pytest.raises(InvalidBetaError):
            BetaSpec(0.0, 1.0, 2.0, 0.5)

    def test_uniform_density(self):
        spec = BetaSpec(3.0, 8.0, 1.0, 1.0)
        for x in (3.0, 4.2, 7.999):
            assert beta_density(spec, x) == pytest.approx(0.2, abs=1e-15)

    def test_symmetric_two_two(self):
        spec = BetaSpec(0.0, 1.0, 2.0, 2.0)
        assert beta_density(spec, 0.5) == pytest.approx(1.5, abs=1e-14)

    def test_outside_support_is_zero(self):
        spec = BetaSpec(2.0, 4.0, 2.0, 3.0)
        assert beta_density(spec, 1.0) == 0.0
        assert beta_density(spec, 4.5) == 0.0

    def test_density_matches_scipy(self):
        for p in SHAPE_GRID:
            for q in SHAPE_GRID:
                spec = BetaSpec(10.0, 100.0, p, q)
                rv = scipy.stats.beta(p, q, loc=10.0, scale=90.0)
                for x in (10.5, 30.0, 55.0, 99.5):
                    assert beta_density(spec, x) == pytest.approx(
                        rv.pdf(x), rel=1e-10)

    def test_density_integrates_to_one(self):
        for p in SHAPE_GRID:
            for q in SHAPE_GRID:
                spec = BetaSpec(-2.0, 5.0, p, q)
                total, _ = scipy.integrate.quad(
                    lambda x: beta_density(spec, x), -2.0, 5.0)
                assert total == pytest.approx(1.0, abs=1e-8)


class TestMeanMode:
    def test_symmetric(self):
        spec = BetaSpec(0.0, 1.0, 2.0, 2.0)
        assert beta_mean(spec) == 0.5
        assert beta_mode(spec) == 0.5

    def test_skewed_fixture(self):
        spec = BetaSpec(10.0, 100.0, 1.1, 2.025)
        assert beta_mean(spec) == pytest.approx(41.68, abs=1e-9)
        assert beta_mode(spec) == pytest.approx(18.0, abs=1e-9)

    def test_uniform_mode_undefined(self):
        with pytest.raises(UndefinedModeError):
            beta_mode(BetaSpec(0.0, 1.0, 1.0, 1.0))

    def test_moments_match_numeric(self):
        # mean by quadrature, mode by golden-section maximization
        phi = (math.sqrt(5.0) - 1.0) / 2.0
        for p in SHAPE_GRID:
            for q in SHAPE_GRID:
                spec = BetaSpec(2.0, 9.0, p, q)
                mean_num, _ = scipy.integrate.quad(
                    lambda x: x * beta_density(spec, x), 2.0, 9.0)
                assert beta_mean(spec) == pytest.approx(mean_num, abs=1e-6)
                if p > 1.0 and q > 1.0:
                    a, b = 2.0, 9.0
                    x1 = b - phi * (b - a)
                    x2 = a + phi * (b - a)
                    f1, f2 = beta_density(spec, x1), beta_density(spec, x2)
                    for _ in range(200):
                        if f1 >= f2:
                            b, x2, f2 = x2, x1, f1
                            x1 = b - phi * (b - a)
                            f1 = beta_density(spec, x1)
                        else:
                            a, x1, f1 = x1, x2, f2
                            x2 = a + phi * (b - a)
                            f2 = beta_density(spec, x2)
                    assert beta_mode(spec) == pytest.approx(0.5 * (a + b), abs=1e-6)


class TestFitBeta:
    def test_fixture_mode_fit(self):
        spec = fit_beta(10.0, 100.0, p=1.1, mode=18.0)
        assert spec.shape_q == pytest.approx(2.025, abs=1e-9)
        assert beta_mode(spec) == pytest.approx(18.0, abs=1e-12)

    def test_symmetric_mean(self):
        spec = fit_beta(0.0, 1.0, p=2.0, mean=0.5)
        assert spec.shape_q == pytest.approx(2.0, abs=1e-12)

    def test_mean_with_known_q(self):
        spec = fit_beta(0.0, 1.0, q=3.0, mean=0.25)
        assert spec.shape_p == pytest.approx(1.0, abs=1e-12)

    def test_mode_with_known_q(self):
        spec = fit_beta(10.0, 100.0, q=2.025, mode=18.0)
        assert beta_mode(spec) == pytest.approx(18.0, abs=1e-12)
        assert spec.shape_p == pytest.approx(1.1, abs=1e-12)

    def test_round_trip_precision(self):
        for target, kwargs in [(37.5, {"p": 1.7}), (81.0, {"q": 1.3})]:
            spec = fit_beta(10.0, 100.0, mean=target, **kwargs)
            assert beta_mean(spec) == pytest.approx(target, abs=1e-12)
        for target, kwargs in [(37.5, {"p": 1.7}), (81.0, {"q": 2.6})]:
            spec = fit_beta(10.0, 100.0, mode=target, **kwargs)
            assert beta_mode(spec) == pytest.approx(target, abs=1e-12)

    def test_infeasible_mean_reports_interval(self):
        with pytest.raises(InfeasibleFitError) as err:
            fit_beta(0.0, 1.0, p=1.0, mean=0.8)
        assert err.value.feasible_low == pytest.approx(0.0)
        assert err.value.feasible_high == pytest.approx(0.5)
        # a target inside the reported interval must succeed
        fit_beta(0.0, 1.0, p=1.0, mean=0.45)

    def test_mode_requires_known_above_one(self):
        with pytest.raises(InfeasibleFitError):
            fit_beta(0.0, 1.0, p=1.0, mode=0.4)

    def test_target_outside_bounds(self):
        with pytest.raises(InvalidBetaError):
            fit_beta(0.0, 1.0, p=2.0, mean=1.0)
        with pytest.raises(InvalidBetaError):
            fit_beta(0.0, 1.0, p=2.0, mean=-0.2)

    def test_exactly_one_of_each(self):
        with pytest.raises(InvalidBetaError):
            fit_beta(0.0, 1.0, p=2.0, q=2.0, mean=0.5)
        with pytest.raises(InvalidBetaError):
            fit_beta(0.0, 1.0, p=2.0)


class TestExpectedUtilityQuadrature:
    def test_uniform_linear(self):
        u = unit_utility(0.0)
        spec = BetaSpec(0.0, 1.0, 1.0, 1.0)
        assert expected_utility_quadrature(u, spec) == pytest.approx(0.5, abs=1e-10)

    def test_linear_equals_mean_value(self):
        attr = make_attribute("x", 0.0, 100.0)
        u = make_exponential_utility(attr, 0.0)
        for spec in [BetaSpec(5.0, 80.0, 2.0, 5.0), BetaSpec(0.0, 100.0, 1.1, 1.3)]:
            assert expected_utility_quadrature(u, spec) == pytest.approx(
                evaluate_utility(u, beta_mean(spec)), abs=1e-9)

    def test_concentrated_beta_approaches_point_value(self):
        u = unit_utility(1.7)
        spec = BetaSpec(0.0, 1.0, 50.0, 50.0)
        assert expected_utility_quadrature(u, spec) == pytest.approx(
            evaluate_utility(u, 0.5), abs=5e-3)

    def test_uniform_exponential_closed_form(self):
        # analytic: int_0^1 u dz = 1/(1 - e^-c) - 1/c
        for c in (-3.0, -0.7, 0.5, 2.0, 6.0):
            u = unit_utility(c)
            spec = BetaSpec(0.0, 1.0, 1.0, 1.0)
            exact = 1.0 / -math.expm1(-c) - 1.0 / c
            assert expected_utility_quadrature(u, spec) == pytest.approx(
                exact, abs=1e-10)

    def test_against_scipy_quad(self):
        attr = make_attribute("cost", 300.0, 50.0)
        u = make_exponential_utility(attr, 2.2)
        spec = BetaSpec(80.0, 220.0, 1.5, 3.5)
        expected, _ = scipy.integrate.quad(
            lambda x: evaluate_utility(u, x) * beta_density(spec, x),
            80.0, 220.0, epsabs=1e-12, epsrel=1e-12)
        assert expected_utility_quadrature(u, spec) == pytest.approx(
            expected, abs=1e-9)

    def test_support_exceeding_range_rejected(self):
        u = unit_utility(1.0)
        with pytest.raises(EstimateRangeError):
            expected_utility_quadrature(u, BetaSpec(-0.1, 0.5, 2.0, 2.0))
        with pytest.raises(EstimateRangeError):
            expected_utility_quadrature(u, BetaSpec(0.5, 1.2, 2.0, 2.0))


class TestExpectedUtilitySeries:
    def test_uniform_exponential_closed_form(self):
        for c in (-2.0, 0.5, 1.0, 4.0):
            u = unit_utility(c)
            spec = BetaSpec(0.0, 1.0, 1.0, 1.0)
            exact = 1.0 / -math.expm1(-c) - 1.0 / c
            assert expected_utility_series(u, spec) == pytest.approx(exact, abs=1e-10)

    def test_matches_quadrature_on_subinterval(self):
        attr = make_attribute("cost", 300.0, 50.0)
        u = make_exponential_utility(attr, 1.0)
        spec = BetaSpec(80.0, 220.0, 2.0, 3.0)
        assert expected_utility_series(u, spec) == pytest.approx(
            expected_utility_quadrature(u, spec), abs=1e-7)

    def test_full_grid_against_quadrature(self):
        # validity domain: every integer pair >= 1, including q = 1 and the
        # uniform case
        attr = make_attribute("x", 0.0, 1.0)
        for c in (-2.0, -0.5, 0.5, 2.0):
            u = make_exponential_utility(attr, c)
            for p in range(1, 10):
                for q in range(1, 10):
                    for lo, hi in ((0.0, 1.0), (0.2, 0.75)):
                        spec = BetaSpec(lo, hi, float(p), float(q))
                        assert expected_utility_series(u, spec) == pytest.approx(
                            expected_utility_quadrature(u, spec), abs=1e-7), \
                            (c, p, q, lo, hi)

    def test_rejections(self):
        u_lin = unit_utility(0.0)
        u_exp = unit_utility(1.0)
        with pytest.raises(UnsupportedShapeError):
            expected_utility_series(u_lin, BetaSpec(0.0, 1.0, 1.0, 1.0))
        with pytest.raises(UnsupportedShapeError):
            expected_utility_series(u_exp, BetaSpec(0.0, 1.0, 1.5, 2.0))
        with pytest.raises(UnsupportedShapeError):
            expected_utility_series(u_exp, BetaSpec(0.0, 1.0, 11.0, 2.0))


class TestDispatchAndProperties:
    def test_point_estimate(self):
        attr = make_attribute("x", 0.0, 10.0)
        u = make_exponential_utility(attr, 1.0)
        est = AttributeEstimate.point("x", 4.0)
        assert expected_single_attribute_utility(u, est) == \
            evaluate_utility(u, 4.0)

    def test_beta_dispatch_agrees_both_paths(self):
        attr = make_attribute("x", 0.0, 10.0)
        u = make_exponential_utility(attr, 2.0)
        spec_int = BetaSpec(1.0, 8.0, 2.0, 3.0)
        spec_frac = BetaSpec(1.0, 8.0, 1.5, 3.0)
        for spec in (spec_int, spec_frac):
            est = AttributeEstimate.beta("x", spec)
            assert expected_single_attribute_utility(u, est) == pytest.approx(
                expected_utility_quadrature(u, spec), abs=1e-7)

    @given(st.floats(0.3, 6.0), st.floats(1.0, 6.0), st.floats(1.0, 6.0),
           st.floats(0.05, 0.45), st.floats(0.55, 0.95))
    @settings(max_examples=60, deadline=None)
    def test_jensen(self, c, p, q, lo, hi):
        spec = BetaSpec(lo, hi, p, q)
        mu = beta_mean(spec)
        concave = unit_utility(c)
        convex = unit_utility(-c)
        linear = unit_utility(0.0)
        assert expected_utility_quadrature(concave, spec) <= \
            evaluate_utility(concave, mu) + 1e-10
        assert expected_utility_quadrature(convex, spec) >= \
            evaluate_utility(convex, mu) - 1e-10
        assert expected_utility_quadrature(linear, spec) == pytest.approx(
            evaluate_utility(linear, mu), abs=1e-10)

    @given(st.floats(-4.0, 4.0), st.floats(1.0, 5.0), st.floats(1.0, 5.0),
           st.floats(0.01, 0.2))
    @settings(max_examples=60, deadline=None)
    def test_first_order_stochastic_dominance(self, c, p, q, shift):
        # same shapes, support shifted toward the preferred end
        u = unit_utility(c)
        low = BetaSpec(0.0, 0.7, p, q)
        high = BetaSpec(shift, 0.7 + shift, p, q)
        eu_low = expected_single_attribute_utility(
            u, AttributeEstimate.beta("z", low))
        eu_high = expected_single_attribute_utility(
            u, AttributeEstimate.beta("z", high))
        assert eu_high >= eu_low - 1e-9

    def test_monte_carlo_cross_check(self):
        attr = make_attribute("cost", 300.0, 50.0)
        u = make_exponential_utility(attr, 2.5)
        spec = BetaSpec(80.0, 220.0, 2.0, 4.0)
        rng = np.random.default_rng(0)
        xs = 80.0 + 140.0 * rng.beta(2.0, 4.0, size=2_000_000)
        zs = (xs - attr.range_worst) / attr.span
        us = np.expm1(-2.5 * zs) / math.expm1(-2.5)
        sigma = us.std(ddof=1) / math.sqrt(len(us))
        assert expected_utility_quadrature(u, spec) == pytest.approx(
            us.mean(), abs=3.0 * sigma)


class TestDensityCurve:
    def test_samples_cover_support(self):
        spec = BetaSpec(10.0, 100.0, 1.1, 2.025)
        pts = density_curve(spec, 11)
        assert pts[0][0] == 10.0
        assert pts[-1][0] == 100.0
        assert len(pts) == 11
        assert all(f >= 0.0 for _, f in pts)
