'''Versioned random generators for integrands, operators and martingales.

Changing what any of these functions draws requires bumping GENERATOR_TAG,
which ends up in every report row.
'''
from __future__ import division

from dataclasses import dataclass

import numpy as np

from .. import utils
from .errors import InputError
from .gamma_ops import GammaOperator, block_gamma_norms
from .processes import (ConstantRule, CovarianceSpec, ElementaryProcess,
                        IndicatorEventRule, LinearPastRule)

GENERATOR_TAG = 'gen-v1'


def process_stream(seed, index):
    """Generator for the index-th random integrand of an experiment."""
    return utils.create_random_stream(seed, 'processes', index)


def _random_partition(grid, rng, n_intervals=None):
    if n_intervals is None:
        n_intervals = int(rng.integers(1, min(grid.n_bins, 4) + 1))
    n_intervals = min(n_intervals, grid.n_bins)
    inner = np.sort(rng.choice(np.arange(1, grid.n_bins), n_intervals - 1,
                               replace=False)) if n_intervals > 1 else []
    return [0] + [int(b) for b in inner] + [grid.n_bins]


def _matrix(rng, space, hilbert):
    return rng.standard_normal((space.dim, hilbert.dim))


def random_deterministic_process(grid, hilbert, space, rng,
                                 n_intervals=None):
    """Deterministic Phi with Gaussian matrices on a random partition."""
    partition = _random_partition(grid, rng, n_intervals)
    rules = [ConstantRule(_matrix(rng, space, hilbert))
             for _ in partition[:-1]]
    return ElementaryProcess(partition, rules, grid, hilbert, space)


def random_rule(kind, start, grid, hilbert, space, rng):
    """A coefficient rule for the interval starting at bin ``start``."""
    if kind == 'constant' or start == 0:
        return ConstantRule(_matrix(rng, space, hilbert))
    observe_bin = int(rng.integers(0, start))
    coordinate = int(rng.integers(0, hilbert.dim))
    if kind == 'indicator':
        n_events = int(rng.integers(2, 4))
        thresholds = grid.sqrt_dt * np.sort(
            rng.standard_normal(n_events - 1))
        matrices = [_matrix(rng, space, hilbert) for _ in range(n_events)]
        return IndicatorEventRule(observe_bin, coordinate, tuple(thresholds),
                                  tuple(matrices))
    elif kind == 'linear':
        slope = _matrix(rng, space, hilbert) / grid.sqrt_dt
        return LinearPastRule(observe_bin, coordinate,
                              _matrix(rng, space, hilbert), slope)
    raise InputError('Rule kind unknown: {!r}'.format(kind))


RULE_KINDS = ('constant', 'indicator', 'linear')


def random_adapted_process(grid, hilbert, space, rng, n_intervals=None,
                           kinds=RULE_KINDS):
    """Adapted Phi cycling through the given rule kinds.

    The first interval always starts at bin 0 and is constant.
    """
    if n_intervals is None:
        n_intervals = min(grid.n_bins, 4)
    partition = _random_partition(grid, rng, n_intervals)
    rules = [random_rule(kinds[n % len(kinds)], start, grid, hilbert, space,
                         rng)
             for n, start in enumerate(partition[:-1])]
    return ElementaryProcess(partition, rules, grid, hilbert, space)


def random_operator(grid, hilbert, space, rng):
    """GammaOperator with independent standard normal entries."""
    matrix = rng.standard_normal((space.dim, grid.n_bins * hilbert.dim))
    return GammaOperator(matrix, grid, hilbert, space)


def random_covariance(dim, rng, rank=None):
    """C = A A^T for a Gaussian dim x rank matrix A."""
    rank = dim if rank is None else rank
    factor = rng.standard_normal((dim, rank))
    matrix = factor.dot(factor.T)
    return CovarianceSpec((matrix + matrix.T) / 2.)


@dataclass(frozen=True)
class MartingaleSpec:
    """First-chaos martingale M(t_i) = sum_{j < i} sum_l B[j, l] dW[j][l].

    M takes values in gamma(H, E) = L(H, E), so B has shape
    (N_t, d_H, d_E, d_H). M(0) = 0 and conditioning on the first i bins
    zeroes out the later increments. As an integrand, M(t_i) is used on
    bin i, which only involves earlier increments.
    """
    coefficients_tensor: np.ndarray
    grid: object
    hilbert: object
    space: object

    is_deterministic = False

    def __post_init__(self):
        tensor = np.asarray(self.coefficients_tensor, dtype=float)
        expected = (self.grid.n_bins, self.hilbert.dim, self.space.dim,
                    self.hilbert.dim)
        if tensor.shape != expected:
            raise InputError('martingale coefficients must have shape {!r}, '
                             'got {!r}'.format(expected, tensor.shape))
        object.__setattr__(self, 'coefficients_tensor', tensor)

    def path_values(self, increments):
        """M(t_0), ..., M(t_N) per path, shape (M, N_t + 1, d_E, d_H)."""
        increments = np.asarray(increments, dtype=float)
        steps = np.einsum('mjl,jlek->mjek', increments,
                          self.coefficients_tensor)
        zero = np.zeros((steps.shape[0], 1) + steps.shape[2:])
        return np.concatenate([zero, np.cumsum(steps, axis=1)], axis=1)

    def coefficients(self, increments):
        """Integrand values M(t_i) on bin i, shape (M, N_t, d_E, d_H)."""
        return self.path_values(increments)[:, :-1]

    def terminal_norms(self, bundle):
        """||M(T)||_{gamma(H, E)} per path."""
        terminal = self.path_values(bundle.increments)[:, -1]
        return block_gamma_norms(terminal, self.space)


def random_martingale(grid, hilbert, space, rng):
    """MartingaleSpec with Gaussian coefficients scaled by 1/sqrt(dt)."""
    tensor = rng.standard_normal((grid.n_bins, hilbert.dim, space.dim,
                                  hilbert.dim)) / grid.sqrt_dt
    return MartingaleSpec(tensor, grid, hilbert, space)
