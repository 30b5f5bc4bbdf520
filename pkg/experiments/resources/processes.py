'''Elementary adapted processes, stopping times and covariances.

An elementary process is constant on the intervals of a grid-aligned
partition. On each interval its L(H, E) value is produced by one of three
coefficient rules, each of which can only read increments of bins strictly
before the interval starts:

    ConstantRule        a fixed matrix
    IndicatorEventRule  one matrix per event A_mn = {dW[b][k] in bucket m}
    LinearPastRule      base + slope * dW[b][k]
'''
from __future__ import division

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .spaces import frozen_array


def _matrix(matrix, space, hilbert, name='matrix'):
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (space.dim, hilbert.dim):
        raise InputError('{} must have shape ({}, {}), got {!r}'.format(
            name, space.dim, hilbert.dim, matrix.shape))
    return frozen_array(matrix)


@dataclass(frozen=True)
class ConstantRule:
    matrix: np.ndarray

    def reads(self):
        return None

    def check(self, space, hilbert):
        object.__setattr__(self, 'matrix',
                           _matrix(self.matrix, space, hilbert))

    def evaluate(self, increments):
        n_paths = increments.shape[0]
        return np.broadcast_to(self.matrix, (n_paths,) + self.matrix.shape)

    def scaled(self, factor):
        return ConstantRule(factor * self.matrix)


@dataclass(frozen=True)
class IndicatorEventRule:
    """matrices[m] on the event thresholds[m-1] < dW[b][k] <= thresholds[m].

    Parameters
    ----------
    observe_bin : int
        Bin b of the increment the events are built from.
    coordinate : int
        H-coordinate k of that increment.
    thresholds : sequence of float
        Increasing bucket edges.
    matrices : sequence of array_like
        len(thresholds) + 1 matrices of shape (d_E, d_H).
    """
    observe_bin: int
    coordinate: int
    thresholds: tuple
    matrices: tuple

    def reads(self):
        return self.observe_bin

    def check(self, space, hilbert):
        thresholds = np.asarray(self.thresholds, dtype=float)
        if np.any(np.diff(thresholds) <= 0):
            raise InputError('thresholds must be increasing: {!r}'.format(
                self.thresholds))
        if len(self.matrices) != len(thresholds) + 1:
            raise InputError('need {} matrices for {} thresholds'.format(
                len(thresholds) + 1, len(thresholds)))
        if not 0 <= self.coordinate < hilbert.dim:
            raise InputError('coordinate out of range: {!r}'.format(
                self.coordinate))
        object.__setattr__(self, 'thresholds', frozen_array(thresholds))
        object.__setattr__(self, 'matrices', frozen_array(
            [_matrix(m, space, hilbert) for m in self.matrices]))

    def evaluate(self, increments):
        observed = increments[:, self.observe_bin, self.coordinate]
        bucket = np.searchsorted(self.thresholds, observed, side='left')
        return self.matrices[bucket]

    def scaled(self, factor):
        return IndicatorEventRule(self.observe_bin, self.coordinate,
                                  self.thresholds, factor * self.matrices)


@dataclass(frozen=True)
class LinearPastRule:
    observe_bin: int
    coordinate: int
    base: np.ndarray
    slope: np.ndarray

    def reads(self):
        return self.observe_bin

    def check(self, space, hilbert):
        if not 0 <= self.coordinate < hilbert.dim:
            raise InputError('coordinate out of range: {!r}'.format(
                self.coordinate))
        object.__setattr__(self, 'base',
                           _matrix(self.base, space, hilbert, 'base'))
        object.__setattr__(self, 'slope',
                           _matrix(self.slope, space, hilbert, 'slope'))

    def evaluate(self, increments):
        observed = increments[:, self.observe_bin, self.coordinate]
        return self.base + observed[:, None, None] * self.slope

    def scaled(self, factor):
        return LinearPastRule(self.observe_bin, self.coordinate,
                              factor * self.base, factor * self.slope)


RULE_CLASSES = (ConstantRule, IndicatorEventRule, LinearPastRule)


class ElementaryProcess(object):
    def __init__(self, partition, rules, grid, hilbert, space):
        """Elementary adapted process on a grid-aligned partition.

        Parameters
        ----------
        partition : sequence of int
            Bin boundaries 0 = b_0 < b_1 < ... < b_N = N_t; interval n covers
            the bins b_{n-1}, ..., b_n - 1.
        rules : sequence
            One coefficient rule per interval.
        grid : TimeGrid
            The time grid.
        hilbert : HilbertSpec
            The space H.
        space : BanachSpaceSpec
            The target space E.

        Raises
        ------
        InputError
            If the partition does not cover the grid or a rule reads an
            increment that is not strictly in the past of its interval.
        """
        self.partition = tuple(int(b) for b in partition)
        self.rules = tuple(rules)
        self.grid = grid
        self.hilbert = hilbert
        self.space = space

        if (len(self.partition) < 2 or self.partition[0] != 0 or
                self.partition[-1] != grid.n_bins or
                np.any(np.diff(self.partition) <= 0)):
            raise InputError('partition must increase from 0 to {}: '
                             '{!r}'.format(grid.n_bins, self.partition))
        if len(self.rules) != len(self.partition) - 1:
            raise InputError('need one rule per interval: {} rules for {} '
                             'intervals'.format(len(self.rules),
                                                len(self.partition) - 1))
        for start, rule in zip(self.partition[:-1], self.rules):
            if not isinstance(rule, RULE_CLASSES):
                raise InputError('Rule unknown: {!r}'.format(rule))
            rule.check(space, hilbert)
            observed = rule.reads()
            if observed is not None and not 0 <= observed < start:
                raise InputError(
                    'rule on the interval starting at bin {} reads bin {}; '
                    'only bins < {} are predictable'.format(
                        start, observed, start))

    @classmethod
    def from_times(cls, times, rules, grid, hilbert, space, atol=1e-12):
        """Build from partition times, refusing points off the grid."""
        boundaries = []
        for t in times:
            index = grid.snap(t)
            if abs(grid.points[index] - t) > atol:
                raise InputError('partition point {!r} is not a grid '
                                 'point'.format(t))
            boundaries.append(index)
        return cls(boundaries, rules, grid, hilbert, space)

    @classmethod
    def constant(cls, matrix, grid, hilbert, space):
        return cls([0, grid.n_bins], [ConstantRule(matrix)], grid, hilbert,
                   space)

    @property
    def is_deterministic(self):
        return all(isinstance(rule, ConstantRule) for rule in self.rules)

    @property
    def n_intervals(self):
        return len(self.rules)

    def bin_intervals(self):
        """Interval index of every bin."""
        return np.repeat(np.arange(self.n_intervals),
                         np.diff(self.partition))

    def coefficients(self, increments):
        """Values Phi(t_i, omega) per path and bin.

        Parameters
        ----------
        increments : np.ndarray, shape (M, N_t, d_H)
            Increments of the driving noise (the original filtration).

        Returns
        -------
        np.ndarray, shape (M, N_t, d_E, d_H)
        """
        increments = np.asarray(increments, dtype=float)
        n_paths = increments.shape[0]
        values = np.empty((n_paths, self.grid.n_bins, self.space.dim,
                           self.hilbert.dim))
        for n, rule in enumerate(self.rules):
            start, stop = self.partition[n], self.partition[n + 1]
            values[:, start:stop] = rule.evaluate(increments)[:, None]
        return values

    def deterministic_coefficients(self):
        """Values per bin, shape (N_t, d_E, d_H), for deterministic Phi."""
        if not self.is_deterministic:
            raise InputError('process is not deterministic')
        dummy = np.zeros((1, self.grid.n_bins, self.hilbert.dim))
        return self.coefficients(dummy)[0]

    def scaled(self, factor):
        return ElementaryProcess(self.partition,
                                 [rule.scaled(factor) for rule in self.rules],
                                 self.grid, self.hilbert, self.space)

    def combine(self, other, a=1., b=1.):
        """The process a Phi + b Psi."""
        return ProcessCombination([self, other], [a, b])

    def restricted(self, start_bin, stop_bin=None):
        """Phi 1_{(t_start, t_stop]}: zero outside the given bins."""
        return ProcessCombination([self], [1.], mask=(start_bin, stop_bin))


class ProcessCombination(object):
    def __init__(self, processes, factors, mask=None):
        """Linear combination sum_j factors[j] processes[j].

        Predictable because every component is. ``mask`` optionally keeps
        only the bins start <= i < stop.
        """
        if len(processes) == 0 or len(processes) != len(factors):
            raise InputError('need one factor per process')
        first = processes[0]
        for process in processes[1:]:
            if (process.grid != first.grid or
                    process.hilbert != first.hilbert or
                    process.space != first.space):
                raise InputError('processes must share grid and spaces')
        self.processes = list(processes)
        self.factors = [float(f) for f in factors]
        self.grid = first.grid
        self.hilbert = first.hilbert
        self.space = first.space
        self.mask = mask

    @property
    def is_deterministic(self):
        return all(p.is_deterministic for p in self.processes)

    def coefficients(self, increments):
        values = self.factors[0] * self.processes[0].coefficients(increments)
        for factor, process in zip(self.factors[1:], self.processes[1:]):
            values = values + factor * process.coefficients(increments)
        if self.mask is not None:
            start, stop = self.mask
            keep = np.zeros(self.grid.n_bins, dtype=bool)
            keep[start:stop] = True
            values = values * keep[None, :, None, None]
        return values

    def deterministic_coefficients(self):
        if not self.is_deterministic:
            raise InputError('process is not deterministic')
        dummy = np.zeros((1, self.grid.n_bins, self.hilbert.dim))
        return self.coefficients(dummy)[0]


@dataclass(frozen=True)
class StoppingTime:
    """Grid-valued stopping time, one index in {0, ..., N_t} per path."""
    indices: np.ndarray

    def __post_init__(self):
        indices = np.asarray(self.indices)
        if indices.ndim != 1 or not np.issubdtype(indices.dtype, np.integer):
            raise InputError('stopping time must be a 1-d integer array')
        indices = np.array(indices, dtype=np.int64)
        indices.setflags(write=False)
        object.__setattr__(self, 'indices', indices)

    def validate(self, bundle):
        if len(self.indices) != bundle.n_paths:
            raise InputError('stopping time has {} paths, bundle {}'.format(
                len(self.indices), bundle.n_paths))
        if np.any(self.indices < 0) or np.any(
                self.indices > bundle.grid.n_bins):
            raise InputError('stopping time outside {{0, ..., {}}}'.format(
                bundle.grid.n_bins))

    @classmethod
    def constant(cls, n_paths, index):
        return cls(np.full(n_paths, index, dtype=np.int64))


def first_passage(values, level):
    """First index where values >= level along the last axis.

    ``values`` has shape (M, N_t + 1); paths that never reach the level get
    N_t (the infimum over the empty set is taken to be T).
    """
    values = np.asarray(values)
    reached = values >= level
    last = values.shape[-1] - 1
    return np.where(reached.any(axis=-1), reached.argmax(axis=-1), last)


@dataclass(frozen=True)
class CovarianceSpec:
    """Symmetric positive semidefinite covariance C of an E-valued BM."""
    matrix: np.ndarray
    tolerance: float = 1e-12

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InputError('covariance must be square, got {!r}'.format(
                matrix.shape))
        if np.max(np.abs(matrix - matrix.T), initial=0.) > self.tolerance:
            raise InputError('covariance is not symmetric')
        smallest = np.linalg.eigvalsh(matrix).min()
        if smallest < -self.tolerance:
            raise InputError('covariance is not positive semidefinite: '
                             'smallest eigenvalue {!r}'.format(smallest))
        object.__setattr__(self, 'matrix', frozen_array(matrix))

    @property
    def dim(self):
        return self.matrix.shape[0]
