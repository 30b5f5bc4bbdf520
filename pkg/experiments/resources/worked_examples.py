'''Two worked examples on sampled paths.

example29_process builds a process that is scalarly square integrable in
time almost surely while its paths are not, driven by independent
{0, 1}-valued variables xi_n with P{xi_n = 1} = 1/n. rkhs_from_covariance
turns an E-valued Brownian motion with covariance C into a cylindrical one
on the reproducing kernel Hilbert space of C.
'''
from __future__ import division

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .. import utils
from .errors import InputError
from .parallel import BlockPool
from .processes import CovarianceSpec
from .spaces import HilbertSpec

logger = logging.getLogger(__name__)

# xi_1, ..., xi_MAX_LEVEL are always drawn so that smaller level settings
# see the same variables
MAX_LEVEL = 32


@dataclass(frozen=True)
class Example29Sample:
    """Samples of phi(t, omega) = n^{1/2} 2^{n/2} xi_n(omega) x_n.

    Attributes
    ----------
    xi : np.ndarray, shape (M, n_max)
        The indicator variables.
    edges : np.ndarray, shape (n_max + 1,)
        Dyadic edges 2^{-n_max}, ..., 1/2, 1 in increasing order.
    amplitudes : np.ndarray, shape (M, n_max)
        n^{1/2} 2^{n/2} xi_n; phi equals amplitudes[:, n - 1] x_n on
        [2^{-n}, 2^{-n+1}).
    partial_sums : np.ndarray, shape (M, n_max)
        Column n - 1 holds sum_k n_k a_k^2 over the successes n_k <= n, with
        a_k = 1/k.
    integrated : np.ndarray, shape (M,)
        int_0^1 [phi(t), x]^2 dt for x = sum_k a_k x_{n_k}, computed from the
        interval values.
    """
    xi: np.ndarray
    edges: np.ndarray
    amplitudes: np.ndarray
    partial_sums: np.ndarray
    integrated: np.ndarray

    @property
    def n_max(self):
        return self.xi.shape[1]

    @property
    def statistic(self):
        return self.partial_sums[:, -1]

    def values(self, t):
        """phi(t, .) as E-valued samples, shape (M, n_max); 0 at t = 0."""
        if not 0. <= t <= 1.:
            raise InputError('t must lie in [0, 1]: {!r}'.format(t))
        values = np.zeros(self.xi.shape)
        if t == 0.:
            return values
        level = int(np.ceil(-np.log2(t)))
        if 1 <= level <= self.n_max:
            values[:, level - 1] = self.amplitudes[:, level - 1]
        return values

    def success_frequencies(self):
        """Empirical P{xi_n = 1} and its standard error per level."""
        frequency = self.xi.mean(axis=0)
        error = np.sqrt(frequency * (1. - frequency) / len(self.xi))
        return frequency, error


def _draw_indicators(task):
    seed, block, n_rows = task
    rng = utils.create_random_stream(seed, 'example29', block)
    uniforms = rng.random((n_rows, MAX_LEVEL))
    levels = np.arange(1, MAX_LEVEL + 1)
    return (uniforms * levels < 1.).astype(float)


def example29_process(n_max, bundle, d_E=None, workers=1):
    """Sample the example process on the dyadic partition of [0, 1].

    Parameters
    ----------
    n_max : int
        Number of dyadic levels, at most MAX_LEVEL.
    bundle : PathBundle
        Provides the horizon (must be 1), the path count and the seed.
    d_E : int, optional
        Dimension of E, at least n_max. Defaults to n_max.
    workers : int, optional
        Worker processes; never changes the result.

    Returns
    -------
    Example29Sample

    Raises
    ------
    InputError
        If T != 1, n_max is out of range or d_E < n_max.
    """
    if bundle.grid.horizon != 1.:
        raise InputError('example29 lives on [0, 1], got T={!r}'.format(
            bundle.grid.horizon))
    if not 1 <= n_max <= MAX_LEVEL:
        raise InputError('n_max must lie in [1, {}]: {!r}'.format(
            MAX_LEVEL, n_max))
    if d_E is not None and d_E < n_max:
        raise InputError('need d_E >= n_max, got d_E={!r}'.format(d_E))

    tasks = [(bundle.seed, block, stop - start)
             for block, (start, stop) in enumerate(
                 utils.split_blocks(bundle.n_paths, bundle.block_size))]
    xi = np.concatenate(BlockPool(workers).map(_draw_indicators, tasks))
    xi = xi[:, :n_max]

    levels = np.arange(1, n_max + 1, dtype=float)
    amplitudes = np.sqrt(levels) * 2.**(levels / 2.) * xi
    ranks = np.cumsum(xi, axis=1)
    weights = np.where(xi > 0, 1. / np.maximum(ranks, 1.), 0.)
    partial_sums = np.cumsum(levels * xi * weights**2, axis=1)

    # [phi, x] = amplitude * a_k on the level-n interval of length 2^{-n}
    lengths = 2.**-levels
    integrated = np.sum(lengths * (amplitudes * weights)**2, axis=1)

    edges = np.concatenate([2.**-levels[::-1], [1.]])
    logger.debug('example29: %d paths, %d levels', bundle.n_paths, n_max)
    return Example29Sample(xi, edges, amplitudes, partial_sums, integrated)


@dataclass(frozen=True)
class CylindricalFactorization:
    """E-valued Brownian motion W = i_C W_H with C = i_C i_C^*.

    Attributes
    ----------
    factor : np.ndarray, shape (d_E, d_E)
        Symmetric square root U of C; i_C acts as U on H = R^{d_E}.
    hilbert : HilbertSpec
        The Hilbert space carrying the cylindrical motion.
    paths : np.ndarray, shape (M, N_t + 1, d_E)
        W(t_i) on every path.
    """
    covariance: CovarianceSpec
    factor: np.ndarray
    hilbert: HilbertSpec
    paths: np.ndarray
    grid: object

    def pairing_moments(self, xstar):
        """Empirical E<W(t_i), x*>^2 and the exact t_i <C x*, x*>.

        Returns
        -------
        empirical, standard_error, exact : np.ndarray, shape (N_t + 1,)
        """
        xstar = np.asarray(xstar, dtype=float)
        pairings = self.paths.dot(xstar)**2
        empirical = pairings.mean(axis=0)
        standard_error = pairings.std(axis=0, ddof=1) / np.sqrt(
            len(pairings))
        exact = self.grid.points * xstar.dot(
            self.covariance.matrix.dot(xstar))
        return empirical, standard_error, exact


def covariance_factor(covariance):
    """Symmetric PSD square root of C with negligible modes removed."""
    eigenvalues, eigenvectors = linalg.eigh(covariance.matrix)
    largest = max(eigenvalues.max(), 0.)
    cutoff = max(covariance.tolerance, largest * eigenvalues.size *
                 np.finfo(float).eps)
    roots = np.where(eigenvalues > cutoff, np.sqrt(np.clip(eigenvalues, 0.,
                                                           None)), 0.)
    return (eigenvectors * roots).dot(eigenvectors.T)


def rkhs_from_covariance(covariance, bundle):
    """Brownian motion with covariance C from the bundle's W_H.

    The bundle's H must have dimension d_E; W(t) = U W_H(t) with U the
    symmetric square root of C, so that E<W(t), x*>^2 = t <C x*, x*>.

    Raises
    ------
    InputError
        If C is not a valid covariance or the dimensions do not match.
    """
    if not isinstance(covariance, CovarianceSpec):
        covariance = CovarianceSpec(covariance)
    if bundle.hilbert.dim != covariance.dim:
        raise InputError('bundle has d_H={}, covariance needs {}'.format(
            bundle.hilbert.dim, covariance.dim))
    factor = covariance_factor(covariance)
    paths = bundle.brownian_paths().dot(factor.T)
    return CylindricalFactorization(covariance, factor, bundle.hilbert,
                                    paths, bundle.grid)
