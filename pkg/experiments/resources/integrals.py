'''Stochastic integrals of elementary adapted processes on sampled paths.

All integrals are built from the same per-bin contributions
Phi(t_i) dW[i], summed over bins with a cumulative sum, so that the final
value of the integral process and every full-basis expansion coincide
bit for bit with ``integrate``.
'''
from __future__ import division

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .gamma_ops import GammaOperator, running_gamma_norms, truncate_index
from .processes import StoppingTime, first_passage
from .spaces import banach_norms

logger = logging.getLogger(__name__)


def _check_process(process, bundle):
    if process.grid != bundle.grid:
        raise InputError('process grid {!r} does not match the bundle grid '
                         '{!r}'.format(process.grid, bundle.grid))
    if process.hilbert != bundle.hilbert:
        raise InputError('process acts on d_H={}, bundle has d_H={}'.format(
            process.hilbert.dim, bundle.hilbert.dim))


def _bin_contributions(coefficients, increments, n_coordinates=None):
    """Phi(t_i) dW[i] restricted to the first n_coordinates of H."""
    if n_coordinates is not None:
        coefficients = coefficients[..., :n_coordinates]
        increments = increments[..., :n_coordinates]
    return np.einsum('miek,mik->mie', coefficients, increments)


def _running_sums(contributions):
    """Partial sums over bins, shape (M, N_t + 1, d_E) starting at 0."""
    n_paths, _, d_E = contributions.shape
    zero = np.zeros((n_paths, 1, d_E))
    return np.concatenate([zero, np.cumsum(contributions, axis=1)], axis=1)


def represent(process, m, bundle):
    """The operator X_Phi(omega_m) in gamma(L^2(0, T; H), E).

    Column (i, k) is sqrt(dt) Phi(t_i, omega_m) h_k, so that
    <X f, x*> = int_0^T [f(t), Phi*(t) x*]_H dt for every step function f.

    Parameters
    ----------
    process : ElementaryProcess
        The integrand.
    m : int
        Path index.
    bundle : PathBundle
        Sampled paths.

    Returns
    -------
    GammaOperator
    """
    _check_process(process, bundle)
    if not 0 <= m < bundle.n_paths:
        raise InputError('path index {!r} outside [0, {})'.format(
            m, bundle.n_paths))
    values = process.coefficients(bundle.increments[m:m + 1])[0]
    return GammaOperator.from_blocks(bundle.grid.sqrt_dt * values,
                                     bundle.grid, bundle.hilbert,
                                     process.space)


def deterministic_operator(process):
    """X_Phi of a deterministic process, without sampled paths."""
    blocks = process.grid.sqrt_dt * process.deterministic_coefficients()
    return GammaOperator.from_blocks(blocks, process.grid, process.hilbert,
                                     process.space)


def operator_blocks(process, bundle):
    """Column blocks sqrt(dt) Phi(t_i, omega_m), shape (M, N_t, d_E, d_H)."""
    _check_process(process, bundle)
    return bundle.grid.sqrt_dt * process.coefficients(bundle.increments)


@dataclass(frozen=True)
class IntegralProcess:
    """Running integrals t_i -> int_0^{t_i} Phi dW_H on every path.

    Attributes
    ----------
    trajectories : np.ndarray, shape (M, N_t + 1, d_E)
        Value at index i is the partial sum through bin i - 1.
    sup_norms : np.ndarray, shape (M,)
        max_i ||trajectories[m, i]||.
    """
    trajectories: np.ndarray
    sup_norms: np.ndarray

    @property
    def final(self):
        return self.trajectories[:, -1]


def _integral_process(process, bundle, decoupled=False, n_coordinates=None):
    _check_process(process, bundle)
    coefficients = process.coefficients(bundle.increments)
    increments = bundle.decoupled if decoupled else bundle.increments
    contributions = _bin_contributions(coefficients, increments,
                                       n_coordinates)
    trajectories = _running_sums(contributions)
    sup_norms = banach_norms(process.space, trajectories).max(axis=1)
    return IntegralProcess(trajectories, sup_norms)


def integral_process(process, bundle, decoupled=False):
    """Trajectories of the integral process plus its per-path sup norm.

    With ``decoupled`` the increments of the independent copy are used while
    the coefficients are still read from the original paths.
    """
    return _integral_process(process, bundle, decoupled)


def integrate(process, bundle):
    """sum_i Phi(t_i, omega_m) dW[m][i] per path, shape (M, d_E)."""
    return _integral_process(process, bundle).final


def integrate_decoupled(process, bundle):
    """sum_i Phi(t_i, omega_m) dW~[m][i], coefficients read from W_H."""
    return _integral_process(process, bundle, decoupled=True).final


def series_expansion(process, bundle, n_terms):
    """sum_{k < K} int Phi h_k dW_H h_k per path.

    Raises
    ------
    InputError
        If K is outside [1, d_H].
    """
    if not 1 <= n_terms <= bundle.hilbert.dim:
        raise InputError('number of terms must lie in [1, {}]: {!r}'.format(
            bundle.hilbert.dim, n_terms))
    return _integral_process(process, bundle, n_coordinates=n_terms).final


class StoppedOperators(object):
    def __init__(self, blocks, stopping_time, grid, hilbert, space):
        """xi_X(tau) per path, built on access.

        ``blocks`` are the column blocks of X(omega_m) for all paths.
        """
        self._blocks = blocks
        self.stopping_time = stopping_time
        self.grid = grid
        self.hilbert = hilbert
        self.space = space

    def __len__(self):
        return len(self._blocks)

    def __getitem__(self, m):
        X = GammaOperator.from_blocks(self._blocks[m], self.grid,
                                      self.hilbert, self.space)
        return truncate_index(X, int(self.stopping_time.indices[m]))


def stop_and_truncate(process, bundle, stopping_time):
    """Stopped integral values and the truncated operators xi_X(tau).

    Returns
    -------
    values : np.ndarray, shape (M, d_E)
        The integral process evaluated at tau on every path.
    operators : StoppedOperators
        operators[m] = xi_{X(omega_m)}(t_{tau[m]}).
    """
    if not isinstance(stopping_time, StoppingTime):
        raise InputError('Expected a StoppingTime, got {!r}'.format(
            stopping_time))
    stopping_time.validate(bundle)
    trajectories = integral_process(process, bundle).trajectories
    values = trajectories[np.arange(bundle.n_paths), stopping_time.indices]
    operators = StoppedOperators(operator_blocks(process, bundle),
                                 stopping_time, bundle.grid, bundle.hilbert,
                                 process.space)
    return values, operators


def threshold_stopping_time(trajectories, space, level):
    """First index where ||int_0^{t_i} Phi dW_H|| >= level, N_t otherwise."""
    norms = banach_norms(space, trajectories)
    return StoppingTime(first_passage(norms, level))


def truncation_gamma_norms(process, bundle):
    """||xi_X(t_i)|| per path and grid point, shape (M, N_t + 1)."""
    return running_gamma_norms(operator_blocks(process, bundle),
                               process.space)


def localizing_times(process, bundle, level):
    """tau_n = inf{t_i : ||xi_X(t_i)||_gamma >= n}, N_t on the empty set.

    The clock is the exact gamma norm for Hilbert targets. For L^q targets it
    is the square function norm of xi_X(t_i), equivalent to the gamma norm
    but not equal to it. Larger levels give pointwise later times.
    """
    if level < 0:
        raise InputError('level must be nonnegative: {!r}'.format(level))
    norms = truncation_gamma_norms(process, bundle)
    return StoppingTime(first_passage(norms, level))


def quadratic_variation(process, bundle):
    """Running sum_{j < i} dt ||Phi(t_j)||^2_HS, shape (M, N_t + 1)."""
    blocks = operator_blocks(process, bundle)
    squares = np.sum(blocks**2, axis=(-2, -1))
    zero = np.zeros((bundle.n_paths, 1))
    return np.concatenate([zero, np.cumsum(squares, axis=1)], axis=1)


def iterated_integral(process, bundle, coordinate=0):
    """int_0^T (int_0^t Phi dW_H) dW(t) per path, shape (M, d_E).

    The scalar Brownian motion W is one coordinate of the independent copy,
    which is adapted to the enlarged filtration.
    """
    if not 0 <= coordinate < bundle.hilbert.dim:
        raise InputError('coordinate out of range: {!r}'.format(coordinate))
    trajectories = integral_process(process, bundle).trajectories
    scalar_increments = bundle.decoupled[:, :, coordinate]
    return np.einsum('mie,mi->me', trajectories[:, :-1], scalar_increments)
