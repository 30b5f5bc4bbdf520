import numpy as np
import pytest

from experiments import utils
from experiments.resources.errors import BudgetExceededError, InputError
from experiments.resources.sign_tree import (MAX_PATTERN_DEPTH, SignTree,
                                             TreeIntegrand,
                                             conditional_expectation,
                                             conditional_mean_defects,
                                             decoupling_transform,
                                             discrete_integral,
                                             discrete_representation,
                                             exact_expectation, norm_powers,
                                             pairwise_mean,
                                             tangent_sequences, umd_ratio)
from experiments.resources.spaces import BanachSpaceSpec


def test_leaf_order_puts_first_step_first():
    tree = SignTree(3)
    assert tree.n_leaves == 8
    assert tree.signs.shape == (8, 3, 1)
    assert list(tree.signs[0, :, 0]) == [-1, -1, -1]
    assert list(tree.signs[1, :, 0]) == [-1, -1, 1]
    assert list(tree.signs[4, :, 0]) == [1, -1, -1]
    assert tree.probability == 0.125


def test_tree_budget():
    with pytest.raises(BudgetExceededError) as error:
        SignTree(13, d_H=1, shadow=True)
    assert error.value.requested == 26
    assert error.value.allowed == 24
    with pytest.raises(InputError):
        SignTree(0)
    with pytest.raises(InputError):
        SignTree(2, dt=0.)


def test_shadow_block():
    tree = SignTree(2, d_H=2, shadow=True)
    assert tree.width == 4
    assert tree.real_signs.shape == (tree.n_leaves, 2, 2)
    assert tree.shadow_signs.shape == (tree.n_leaves, 2, 2)
    with pytest.raises(InputError):
        SignTree(2).shadow_signs


def test_pairwise_mean():
    assert pairwise_mean(np.arange(8.), axis=0) == 3.5
    with pytest.raises(InputError):
        pairwise_mean(np.arange(6.), axis=0)


def test_brownian_square_expectations():
    tree = SignTree(6, dt=0.25)
    endpoint = tree.increments()[:, :, 0].sum(axis=1)
    assert exact_expectation(tree, endpoint) == 0.
    assert exact_expectation(tree, endpoint, p=2) == 1.5
    assert exact_expectation(tree, endpoint**4) == 3. * 1.5**2 - 2. * 6 * \
        0.25**2


def test_conditional_expectation_of_martingale():
    tree = SignTree(5, dt=0.25)
    paths = np.cumsum(tree.increments()[:, :, 0], axis=1)
    for steps in range(1, 5):
        expected = paths[:, steps - 1].reshape(2**steps, -1)[:, 0]
        assert np.array_equal(
            conditional_expectation(tree, paths[:, -1], steps), expected)
    assert np.array_equal(conditional_expectation(tree, paths[:, -1], 5),
                          paths[:, -1])
    with pytest.raises(InputError):
        conditional_expectation(tree, paths[:, -1], 6)
    with pytest.raises(InputError):
        conditional_expectation(tree, paths[:-1, -1], 2)


def test_norm_powers():
    values = np.array([[3., 4.], [1., 0.]])
    assert np.array_equal(norm_powers(values, 2, BanachSpaceSpec.hilbert(2)),
                          [25., 1.])
    assert np.array_equal(norm_powers(np.array([-2., 3.]), 3), [8., 27.])


def test_integrand_tables_are_checked():
    with pytest.raises(InputError):
        TreeIntegrand([np.zeros(1), np.zeros(3)])
    with pytest.raises(InputError):
        TreeIntegrand([np.zeros((1, 2)), np.zeros((2, 3))])
    integrand = TreeIntegrand([np.zeros(1), np.zeros(2)])
    with pytest.raises(InputError):
        integrand.leaf_values(SignTree(3))


def test_integrand_is_predictable():
    tree = SignTree(4)
    rng = utils.create_random_stream(1, 'oracle')
    integrand = TreeIntegrand.random(4, 1, (), rng)
    values = integrand.leaf_values(tree)
    assert values.shape == (16, 4)
    for step in range(4):
        # leaves sharing the first `step` signs see the same value
        blocks = values[:, step].reshape(2**step, -1)
        assert np.all(blocks == blocks[:, :1])


def test_discrete_integral_is_a_martingale():
    tree = SignTree(6)
    rng = utils.create_random_stream(2, 'oracle')
    integrand = TreeIntegrand.random(6, 1, (2,), rng)
    integral = discrete_integral(tree, integrand)
    assert integral.shape == (tree.n_leaves, 2)
    assert np.array_equal(exact_expectation(tree, integral), [0., 0.])
    squares = (integrand.leaf_values(tree)**2).sum(axis=1)
    assert np.array_equal(exact_expectation(tree, integral**2),
                          exact_expectation(tree, squares))
    with pytest.raises(InputError):
        discrete_integral(SignTree(6, shadow=True), integrand)


def test_representation_of_brownian_square():
    tree = SignTree(8, dt=0.25)
    increments = tree.increments()[:, :, 0]
    paths = np.cumsum(increments, axis=1)
    target = paths[:, -1]**2 - 8 * 0.25
    phi = discrete_representation(tree, target)
    previous = np.concatenate([np.zeros((tree.n_leaves, 1)), paths[:, :-1]],
                              axis=1)
    assert np.array_equal(phi, 2. * previous)
    assert np.array_equal(discrete_integral(tree, phi), target)


def test_representation_roundtrip():
    tree = SignTree(7)
    rng = utils.create_random_stream(3, 'oracle')
    values = TreeIntegrand.random(7, 1, (3,), rng).leaf_values(tree)
    integral = discrete_integral(tree, values)
    assert np.array_equal(discrete_representation(tree, integral), values)


def test_representation_rejects_bad_input():
    tree = SignTree(3)
    with pytest.raises(InputError):
        discrete_representation(tree, np.ones(tree.n_leaves))
    with pytest.raises(BudgetExceededError):
        discrete_representation(SignTree(11), np.zeros(2**11))


def test_decoupling_transform_identities():
    tree = SignTree(5, shadow=True)
    rng = utils.create_random_stream(4, 'oracle')
    integrand = TreeIntegrand.random(5, 1, (2, 1), rng)
    d, e = tangent_sequences(tree, integrand)
    transcript = decoupling_transform(d, e)
    assert transcript.r.shape == (tree.n_leaves, 10, 2)
    assert transcript.pair_defects() == (0., 0.)
    assert transcript.sum_defects() == (0., 0.)
    assert not conditional_mean_defects(tree, transcript).any()
    lhs = exact_expectation(tree, transcript.sum_d, 2,
                            BanachSpaceSpec.hilbert(2))
    rhs = exact_expectation(tree, transcript.sum_e, 2,
                            BanachSpaceSpec.hilbert(2))
    assert lhs == rhs


def test_conditional_mean_detects_unpredictable_sequences():
    tree = SignTree(3, shadow=True)
    # d_n = 1 is not centred
    d = np.abs(tree.real_signs.astype(float))
    transcript = decoupling_transform(d, np.zeros_like(d))
    assert conditional_mean_defects(tree, transcript).max() > 0.


def test_decoupling_transform_needs_aligned_input():
    with pytest.raises(InputError):
        decoupling_transform(np.zeros((4, 2, 1)), np.zeros((4, 3, 1)))
    with pytest.raises(InputError):
        tangent_sequences(SignTree(2), TreeIntegrand([np.zeros((1, 1, 1)),
                                                      np.zeros((2, 1, 1))]))


def test_scalar_sign_transforms_are_isometric_for_p2():
    estimate = umd_ratio(BanachSpaceSpec.hilbert(1), 2., 5, 3, seed=8)
    assert estimate.max_ratio == 1.
    assert len(estimate.pattern) == 5


def test_sign_transform_ratio_is_at_least_one():
    estimate = umd_ratio(BanachSpaceSpec.lq(2, 4.), 4., 4, 2, seed=8)
    assert estimate.max_ratio >= 1.
    assert estimate.trials == 2


def test_sign_transform_budget():
    with pytest.raises(BudgetExceededError):
        umd_ratio(BanachSpaceSpec.hilbert(1), 2., MAX_PATTERN_DEPTH + 1, 1,
                  seed=0)
    with pytest.raises(InputError):
        umd_ratio(BanachSpaceSpec.hilbert(1), 2., 3, 0, seed=0)


def test_conditional_mean_flags_missing_tangent_copy():
    tree = SignTree(3, shadow=True)
    d = tree.real_signs.astype(float)
    defects = conditional_mean_defects(tree, decoupling_transform(
        d, np.zeros_like(d)))
    # r_{2n-1} = d_n / 2 stays centred given the past
    assert not defects[0::2].any()
    assert np.all(defects[1::2] == 0.5)
