import numpy as np
import pytest

from experiments import utils
from experiments.resources.errors import InputError
from experiments.resources.generators import (MartingaleSpec,
                                              random_adapted_process,
                                              random_covariance,
                                              random_deterministic_process,
                                              random_martingale,
                                              random_operator, random_rule)
from experiments.resources.processes import (ConstantRule, CovarianceSpec,
                                             ElementaryProcess,
                                             IndicatorEventRule,
                                             LinearPastRule, StoppingTime,
                                             first_passage)

A = np.array([[1., 0.], [0., 2.], [1., 1.]])
B = np.array([[0., 1.], [1., 0.], [0., -1.]])


def rng(index=0):
    return utils.create_random_stream(3, 'processes', index)


def test_constant_process(grid, hilbert, euclidean, bundle):
    process = ElementaryProcess.constant(A, grid, hilbert, euclidean)
    assert process.is_deterministic
    values = process.coefficients(bundle.increments)
    assert values.shape == (bundle.n_paths, grid.n_bins, 3, 2)
    assert np.array_equal(values[17, 3], A)
    assert np.array_equal(process.deterministic_coefficients()[0], A)


def test_partition_must_cover_grid(grid, hilbert, euclidean):
    rules = [ConstantRule(A), ConstantRule(B)]
    for partition in ([0, 2], [1, 2, 4], [0, 2, 2, 4], [0, 3, 2]):
        with pytest.raises(InputError):
            ElementaryProcess(partition, rules, grid, hilbert, euclidean)
    with pytest.raises(InputError):
        ElementaryProcess([0, 4], rules, grid, hilbert, euclidean)


def test_rules_must_be_predictable(grid, hilbert, euclidean):
    constant = ConstantRule(A)
    future = LinearPastRule(2, 0, A, B)
    with pytest.raises(InputError):
        ElementaryProcess([0, 2, 4], [constant, future], grid, hilbert,
                          euclidean)
    present = IndicatorEventRule(1, 1, (0.,), (A, B))
    with pytest.raises(InputError):
        ElementaryProcess([0, 1, 4], [constant, present], grid, hilbert,
                          euclidean)
    process = ElementaryProcess([0, 2, 4], [constant, present], grid,
                                hilbert, euclidean)
    assert not process.is_deterministic


def test_rule_shapes_are_checked(grid, hilbert, euclidean):
    with pytest.raises(InputError):
        ElementaryProcess.constant(np.ones((2, 2)), grid, hilbert, euclidean)
    rules = [ConstantRule(A), IndicatorEventRule(0, 0, (1., 0.), (A, B, A))]
    with pytest.raises(InputError):
        ElementaryProcess([0, 2, 4], rules, grid, hilbert, euclidean)
    rules = [ConstantRule(A), IndicatorEventRule(0, 0, (0.,), (A,))]
    with pytest.raises(InputError):
        ElementaryProcess([0, 2, 4], rules, grid, hilbert, euclidean)
    rules = [ConstantRule(A), LinearPastRule(0, 5, A, B)]
    with pytest.raises(InputError):
        ElementaryProcess([0, 2, 4], rules, grid, hilbert, euclidean)


def test_indicator_rule_selects_bucket(grid, hilbert, euclidean):
    rule = IndicatorEventRule(0, 1, (0.,), (A, B))
    process = ElementaryProcess([0, 1, 4], [ConstantRule(A), rule], grid,
                                hilbert, euclidean)
    increments = np.zeros((2, grid.n_bins, hilbert.dim))
    increments[0, 0, 1] = -0.3
    increments[1, 0, 1] = 0.3
    values = process.coefficients(increments)
    assert np.array_equal(values[0, 2], A)
    assert np.array_equal(values[1, 2], B)


def test_linear_rule(grid, hilbert, euclidean):
    rule = LinearPastRule(1, 0, A, B)
    process = ElementaryProcess([0, 2, 4], [ConstantRule(A), rule], grid,
                                hilbert, euclidean)
    increments = np.zeros((1, grid.n_bins, hilbert.dim))
    increments[0, 1, 0] = 0.5
    assert np.array_equal(process.coefficients(increments)[0, 3],
                          A + 0.5 * B)
    with pytest.raises(InputError):
        process.deterministic_coefficients()


def test_from_times(grid, hilbert, euclidean):
    rules = [ConstantRule(A), ConstantRule(B)]
    process = ElementaryProcess.from_times([0., 0.5, 1.], rules, grid,
                                           hilbert, euclidean)
    assert process.partition == (0, 2, 4)
    with pytest.raises(InputError):
        ElementaryProcess.from_times([0., 0.4, 1.], rules, grid, hilbert,
                                     euclidean)


def test_linear_combinations(grid, hilbert, euclidean, bundle):
    phi = ElementaryProcess.constant(A, grid, hilbert, euclidean)
    psi = ElementaryProcess([0, 1, 4], [ConstantRule(B),
                                        LinearPastRule(0, 0, A, B)],
                            grid, hilbert, euclidean)
    combination = phi.combine(psi, 2., -1.)
    expected = (2. * phi.coefficients(bundle.increments) -
                psi.coefficients(bundle.increments))
    assert np.allclose(combination.coefficients(bundle.increments), expected)
    assert not combination.is_deterministic
    scaled = phi.scaled(3.).deterministic_coefficients()
    assert np.array_equal(scaled, 3. * phi.deterministic_coefficients())


def test_restriction_zeroes_other_bins(grid, hilbert, euclidean):
    phi = ElementaryProcess.constant(A, grid, hilbert, euclidean)
    values = phi.restricted(1, 3).deterministic_coefficients()
    assert not values[0].any() and not values[3].any()
    assert np.array_equal(values[1], A)


def test_combination_needs_shared_specs(grid, hilbert, euclidean, l4):
    phi = ElementaryProcess.constant(A, grid, hilbert, euclidean)
    psi = ElementaryProcess.constant(A, grid, hilbert, l4)
    with pytest.raises(InputError):
        phi.combine(psi)


def test_first_passage():
    values = np.array([[0., 1., 3., 2.], [0., 0.5, 0.5, 0.5]])
    assert np.array_equal(first_passage(values, 2.), [2, 3])
    assert np.array_equal(first_passage(values, 0.), [0, 0])


def test_stopping_time_validation(bundle):
    with pytest.raises(InputError):
        StoppingTime(np.array([0.5, 1.]))
    tau = StoppingTime.constant(bundle.n_paths, bundle.grid.n_bins + 1)
    with pytest.raises(InputError):
        tau.validate(bundle)
    with pytest.raises(InputError):
        StoppingTime.constant(3, 0).validate(bundle)


def test_covariance_checks():
    assert CovarianceSpec(np.eye(3)).dim == 3
    with pytest.raises(InputError):
        CovarianceSpec(np.ones((2, 3)))
    with pytest.raises(InputError):
        CovarianceSpec(np.array([[1., 0.5], [0., 1.]]))
    with pytest.raises(InputError):
        CovarianceSpec(np.array([[1., 2.], [2., 1.]]))
    covariance = random_covariance(4, rng(), rank=2)
    assert np.linalg.matrix_rank(covariance.matrix) == 2


def test_random_processes_are_adapted(grid, hilbert, euclidean, bundle):
    for index in range(10):
        process = random_adapted_process(grid, hilbert, euclidean,
                                         rng(index))
        assert process.partition[0] == 0
        assert process.partition[-1] == grid.n_bins
        values = process.coefficients(bundle.increments)
        assert np.all(np.isfinite(values))
        # changing the future does not change the values
        altered = np.array(bundle.increments)
        altered[:, -1] += 1.
        assert np.array_equal(process.coefficients(altered)[:, -1],
                              values[:, -1])


def test_random_generators_are_reproducible(grid, hilbert, euclidean):
    first = random_deterministic_process(grid, hilbert, euclidean, rng(4))
    again = random_deterministic_process(grid, hilbert, euclidean, rng(4))
    assert first.is_deterministic
    assert np.array_equal(first.deterministic_coefficients(),
                          again.deterministic_coefficients())
    R = random_operator(grid, hilbert, euclidean, rng(5))
    assert R.matrix.shape == (3, grid.n_bins * hilbert.dim)
    with pytest.raises(InputError):
        random_rule('exponential', 2, grid, hilbert, euclidean, rng())


def test_martingale_values(grid, hilbert, euclidean, bundle):
    martingale = random_martingale(grid, hilbert, euclidean, rng())
    values = martingale.path_values(bundle.increments)
    assert values.shape == (bundle.n_paths, grid.n_bins + 1, 3, 2)
    assert not values[:, 0].any()
    assert martingale.terminal_norms(bundle).shape == (bundle.n_paths,)
    # the integrand on bin i only sees increments before bin i
    altered = np.array(bundle.increments)
    altered[:, 2:] = 0.
    assert np.array_equal(martingale.coefficients(altered)[:, :3],
                          martingale.coefficients(bundle.increments)[:, :3])
    with pytest.raises(InputError):
        MartingaleSpec(np.zeros((grid.n_bins, 2, 3, 1)), grid, hilbert,
                       euclidean)
