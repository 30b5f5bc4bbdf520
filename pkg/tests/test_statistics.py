import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from experiments.resources.errors import InputError
from experiments.resources.statistics import (MAX_BAND_SPREAD, MomentEstimate,
                                              binomial_interval,
                                              estimate_moment,
                                              ratio_interval, relative_spread,
                                              seed_band, warn_exponent)

norms = arrays(np.float64, 50,
               elements=st.floats(min_value=0., max_value=1e3,
                                  allow_nan=False))


def test_constant_samples_have_no_error():
    estimate = estimate_moment(np.full(10, 3.), 4.)
    assert estimate.value == pytest.approx(3.)
    assert estimate.standard_error == 0.
    assert estimate.samples == 10


def test_zero_samples():
    estimate = estimate_moment(np.zeros(5), 2.)
    assert estimate.value == 0. and estimate.standard_error == 0.


@pytest.mark.parametrize('samples, p', [([1.], 2.), ([1., 2.], 0.5),
                                        ([1., 2.], np.inf)])
def test_moment_rejects_invalid_input(samples, p):
    with pytest.raises(InputError):
        estimate_moment(samples, p)


@seed(1)
@given(norms)
def test_moments_increase_with_p(samples):
    second = estimate_moment(samples, 2.).value
    fourth = estimate_moment(samples, 4.).value
    assert second <= fourth * (1. + 1e-9) + 1e-12


def test_moment_error_shrinks_with_samples():
    rng = np.random.default_rng(0)
    few = estimate_moment(np.abs(rng.standard_normal(100)), 2.)
    many = estimate_moment(np.abs(rng.standard_normal(10000)), 2.)
    assert many.standard_error < few.standard_error


def test_power_and_scaling():
    estimate = MomentEstimate(2., 3., 0.1, 100)
    squared = estimate.power(2.)
    assert squared.value == pytest.approx(9.)
    assert squared.standard_error == pytest.approx(0.6)
    scaled = estimate.scaled(-2.)
    assert scaled.value == -6. and scaled.standard_error == pytest.approx(0.2)
    exact = MomentEstimate.exact(5.)
    assert exact.samples == 0 and exact.standard_error == 0.


def test_ratio_interval():
    lhs = MomentEstimate(2., 2., 0.1, 100)
    rhs = MomentEstimate(2., 4., 0.2, 100)
    ratio, low, high = ratio_interval(lhs, rhs, 4.)
    assert ratio == 0.5
    error = 0.5 * np.sqrt(2. * 0.05**2)
    assert low == pytest.approx(0.5 - 4. * error)
    assert high == pytest.approx(0.5 + 4. * error)


def test_ratio_interval_edge_cases():
    zero = MomentEstimate.exact(0.)
    one = MomentEstimate(2., 1., 0.1, 10)
    assert all(np.isnan(ratio_interval(one, zero)))
    ratio, low, high = ratio_interval(MomentEstimate(2., 0., 0.2, 10), one,
                                      2.)
    assert ratio == 0. and low == pytest.approx(-0.4)
    assert ratio_interval(MomentEstimate.exact(2.),
                          MomentEstimate.exact(2.)) == (1., 1., 1.)


def test_binomial_interval_covers_estimate():
    low, high = binomial_interval(30, 100, 4.)
    assert low < 0.3 < high
    low, high = binomial_interval(0, 100, 4.)
    assert low == pytest.approx(0., abs=1e-12) and high > 0.
    with pytest.raises(InputError):
        binomial_interval(5, 3)


def test_warn_exponent(caplog):
    assert not warn_exponent(2.)
    assert warn_exponent(3.)
    assert 'outside' in caplog.text


def test_relative_spread():
    assert relative_spread([1., 1., 1.]) == 0.
    assert relative_spread([0.9, 1.1]) == pytest.approx(0.2)
    assert relative_spread([1., np.nan]) == np.inf
    assert relative_spread([-1., 1.]) == np.inf


def test_stable_seed_band():
    band = seed_band([[1.0, 1.2], [1.05, 1.25], [0.95, 1.15]], [1, 2, 3])
    assert (band.low, band.high) == (0.95, 1.25)
    assert band.spread == pytest.approx(0.1)
    assert band.stable
    assert 'over 3 seeds' in band.describe()


def test_unstable_seed_band():
    # lower edge moves from 1 to 0.5
    band = seed_band([[1.0, 1.2], [0.5, 1.2]], [1, 2])
    assert band.spread == pytest.approx(0.5 / 0.75)
    assert band.spread >= MAX_BAND_SPREAD
    assert not band.stable


def test_seed_band_without_finite_ratios():
    band = seed_band([[1., 1.1], [np.nan, np.nan]], [1, 2])
    assert band.spread == np.inf and not band.stable
    band = seed_band([[1., np.nan], [1.01, np.inf]], [1, 2])
    assert band.stable


def test_seed_band_needs_one_set_per_seed():
    with pytest.raises(InputError):
        seed_band([[1.]], [1, 2])
    with pytest.raises(InputError):
        seed_band([[1.]], [1])
