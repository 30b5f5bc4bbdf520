import numpy as np
import pytest

from experiments import utils
from experiments.resources.errors import InputError
from experiments.resources.generators import random_covariance
from experiments.resources.paths import sample_paths
from experiments.resources.processes import CovarianceSpec
from experiments.resources.spaces import TimeGrid
from experiments.resources.worked_examples import (MAX_LEVEL,
                                                   covariance_factor,
                                                   example29_process,
                                                   rkhs_from_covariance)

SIGMAS = 4.


@pytest.fixture(scope='module')
def unit_bundle():
    return sample_paths(TimeGrid(1., 4), 1, 20000, 29)


def test_indicators_and_amplitudes(unit_bundle):
    sample = example29_process(12, unit_bundle)
    assert sample.xi.shape == (unit_bundle.n_paths, 12)
    assert set(np.unique(sample.xi)) <= {0., 1.}
    assert np.all(sample.xi[:, 0] == 1.)
    levels = np.arange(1, 13)
    expected = np.sqrt(levels) * 2.**(levels / 2.) * sample.xi
    assert np.allclose(sample.amplitudes, expected)
    assert sample.edges[0] == 2.**-12 and sample.edges[-1] == 1.
    assert np.all(np.diff(sample.edges) > 0.)


def test_success_frequencies(unit_bundle):
    sample = example29_process(8, unit_bundle)
    frequency, error = sample.success_frequencies()
    expected = 1. / np.arange(1, 9)
    assert frequency[0] == 1. and error[0] == 0.
    assert np.all(np.abs(frequency[1:] - expected[1:]) <=
                  SIGMAS * error[1:])


def test_smaller_levels_see_the_same_draws(unit_bundle):
    small = example29_process(8, unit_bundle)
    large = example29_process(16, unit_bundle)
    assert np.array_equal(small.xi, large.xi[:, :8])
    assert np.array_equal(small.partial_sums, large.partial_sums[:, :8])


def test_statistic_grows_with_levels(unit_bundle):
    sample = example29_process(16, unit_bundle)
    assert np.all(np.diff(sample.partial_sums, axis=1) >= 0.)
    assert np.median(sample.partial_sums[:, -1]) > \
        np.median(sample.partial_sums[:, 7])
    assert np.allclose(sample.integrated, sample.statistic)


def test_values_on_dyadic_intervals(unit_bundle):
    sample = example29_process(4, unit_bundle)
    assert not sample.values(0.).any()
    at_quarter = sample.values(0.3)
    assert np.array_equal(at_quarter[:, 1], sample.amplitudes[:, 1])
    assert not np.delete(at_quarter, 1, axis=1).any()
    assert not sample.values(2.**-6).any()
    with pytest.raises(InputError):
        sample.values(1.5)


def test_example_rejects_invalid_settings(unit_bundle):
    with pytest.raises(InputError):
        example29_process(MAX_LEVEL + 1, unit_bundle)
    with pytest.raises(InputError):
        example29_process(8, unit_bundle, d_E=4)
    other = sample_paths(TimeGrid(2., 4), 1, 10, 29)
    with pytest.raises(InputError):
        example29_process(8, other)


def test_covariance_factor_squares_to_covariance():
    covariance = random_covariance(4, utils.create_random_stream(
        1, 'covariance'), rank=2)
    factor = covariance_factor(covariance)
    assert np.allclose(factor, factor.T)
    assert np.allclose(factor.dot(factor), covariance.matrix)


def test_rkhs_pairings_match_covariance():
    covariance = random_covariance(3, utils.create_random_stream(
        2, 'covariance'))
    bundle = sample_paths(TimeGrid(1., 4), 3, 20000, 31)
    factorization = rkhs_from_covariance(covariance, bundle)
    assert factorization.paths.shape == (20000, 5, 3)
    for xstar in (np.array([1., 0., 0.]), np.array([0.5, -1., 2.])):
        empirical, error, exact = factorization.pairing_moments(xstar)
        assert empirical[0] == 0. and exact[0] == 0.
        assert np.all(np.abs(empirical[1:] - exact[1:]) <=
                      SIGMAS * error[1:])


def test_rkhs_needs_matching_dimensions():
    bundle = sample_paths(TimeGrid(1., 4), 2, 10, 31)
    with pytest.raises(InputError):
        rkhs_from_covariance(np.eye(3), bundle)
    with pytest.raises(InputError):
        rkhs_from_covariance(np.array([[1., 2.], [2., 1.]]), bundle)
    assert rkhs_from_covariance(CovarianceSpec(np.eye(2)),
                                bundle).hilbert.dim == 2
