#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Finite-dimensional models of the spaces the harness works in.

H is R^{d_H} with its coordinate basis, E is either a Euclidean space or a
weighted finite L^q space, and L^2(0, T; H) is replaced by the span of the
step functions e_{i,k} = dt^{-1/2} 1_{I_i} h_k on a uniform grid.
'''
from __future__ import division

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

HILBERT = 'hilbert'
LQ = 'lq'
VARIANTS = (HILBERT, LQ)


def frozen_array(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TimeGrid:
    """Uniform partition 0 = t_0 < ... < t_N = T of [0, T].

    Parameters
    ----------
    horizon : float
        The time horizon T > 0.
    n_bins : int
        Number of bins N_t >= 1.
    """
    horizon: float
    n_bins: int

    def __post_init__(self):
        if not (np.isfinite(self.horizon) and self.horizon > 0):
            raise InputError('horizon must be positive: {!r}'.format(
                self.horizon))
        if int(self.n_bins) != self.n_bins or self.n_bins < 1:
            raise InputError('n_bins must be an integer >= 1: {!r}'.format(
                self.n_bins))
        object.__setattr__(self, 'horizon', float(self.horizon))
        object.__setattr__(self, 'n_bins', int(self.n_bins))
        if abs(self.dt * self.n_bins - self.horizon) > np.spacing(
                self.horizon):
            raise InputError('mesh does not reproduce the horizon: '
                             '{!r} * {!r}'.format(self.dt, self.n_bins))

    @property
    def dt(self):
        return self.horizon / self.n_bins

    @property
    def sqrt_dt(self):
        return np.sqrt(self.dt)

    @property
    def points(self):
        """Grid points t_0, ..., t_N with t_N = T exactly."""
        points = np.arange(self.n_bins + 1) * self.dt
        points[-1] = self.horizon
        return points

    def snap(self, t):
        """Index of the grid point nearest to t (round half up).

        Raises
        ------
        InputError
            If t lies outside [0, T].
        """
        if not (0. <= t <= self.horizon):
            raise InputError('time {!r} outside [0, {!r}]'.format(
                t, self.horizon))
        return min(int(np.floor(t / self.dt + 0.5)), self.n_bins)

    def snap_shift(self, delta):
        """Number of whole bins closest to a nonnegative shift delta."""
        if not delta >= 0.:
            raise InputError('shift must be nonnegative: {!r}'.format(delta))
        return int(np.floor(delta / self.dt + 0.5))


@dataclass(frozen=True)
class HilbertSpec:
    """H = R^{d_H} with the standard orthonormal basis."""
    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise InputError('d_H must be a positive integer: {!r}'.format(
                self.dim))
        object.__setattr__(self, 'dim', int(self.dim))

    def basis_vector(self, k):
        h = np.zeros(self.dim)
        h[k] = 1.
        return h


@dataclass(frozen=True)
class BanachSpaceSpec:
    """The target space E.

    Parameters
    ----------
    variant : str
        'hilbert' (Euclidean norm) or 'lq' (weighted l^q over d_E points).
    dim : int
        Dimension d_E.
    q : float, optional
        Exponent of the lq variant, must lie in (1, inf).
    weights : array_like, optional
        Strictly positive point masses of the lq variant. Unit weights if
        None. The Hilbert variant always uses unit weights.
    """
    variant: str
    dim: int
    q: float = 2.
    weights: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        variant = str(self.variant).lower()
        if variant not in VARIANTS:
            raise InputError('Unknown space variant: {!r}'.format(
                self.variant))
        object.__setattr__(self, 'variant', variant)
        if int(self.dim) != self.dim or self.dim < 1:
            raise InputError('d_E must be a positive integer: {!r}'.format(
                self.dim))
        object.__setattr__(self, 'dim', int(self.dim))

        if variant == HILBERT:
            object.__setattr__(self, 'q', 2.)
            weights = np.ones(self.dim)
        else:
            if not (1. < float(self.q) < np.inf):
                raise InputError('q must lie in (1, inf): {!r}'.format(
                    self.q))
            object.__setattr__(self, 'q', float(self.q))
            if self.weights is None:
                weights = np.ones(self.dim)
            else:
                weights = np.asarray(self.weights, dtype=float)
                if weights.shape != (self.dim,):
                    raise InputError('Expected {} weights, got {!r}'.format(
                        self.dim, weights.shape))
                if not np.all(weights > 0):
                    raise InputError('weights must be strictly positive')
        object.__setattr__(self, 'weights', frozen_array(weights))

    def __eq__(self, other):
        if not isinstance(other, BanachSpaceSpec):
            return NotImplemented
        return (self.variant == other.variant and self.dim == other.dim and
                self.q == other.q and
                np.array_equal(self.weights, other.weights))

    def __hash__(self):
        return hash((self.variant, self.dim, self.q,
                     tuple(self.weights.tolist())))

    @property
    def is_hilbert(self):
        return self.variant == HILBERT

    @property
    def conjugate_exponent(self):
        return self.q / (self.q - 1.)

    @classmethod
    def hilbert(cls, dim):
        return cls(HILBERT, dim)

    @classmethod
    def lq(cls, dim, q, weights=None):
        return cls(LQ, dim, q, weights)

    def describe(self):
        if self.is_hilbert:
            return 'Hilbert({})'.format(self.dim)
        return 'L{:g}({})'.format(self.q, self.dim)


def _check_last_axis(spec, x, name='x'):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] != spec.dim:
        raise InputError('{} must have trailing dimension d_E={}, got '
                         'shape {!r}'.format(name, spec.dim, x.shape))
    return x


def banach_norms(spec, x):
    """Norms of E-valued samples along the last axis.

    Parameters
    ----------
    spec : BanachSpaceSpec
        The target space.
    x : array_like, shape (..., d_E)
        Coordinates.

    Returns
    -------
    np.ndarray, shape (...)
        The norms.
    """
    x = _check_last_axis(spec, x)
    if spec.is_hilbert:
        return np.sqrt(np.sum(x * x, axis=-1))
    q = spec.q
    return np.sum(spec.weights * np.abs(x)**q, axis=-1)**(1. / q)


def banach_norm(spec, x):
    """Norm of a single element of E."""
    x = _check_last_axis(spec, x)
    if x.ndim != 1:
        raise InputError('Expected a single vector, got shape {!r}'.format(
            x.shape))
    return float(banach_norms(spec, x))


def dual_norm(spec, xstar):
    """Norm of x* in E* under the weighted pairing.

    For the lq variant this is the weighted l^{q'} norm with the conjugate
    exponent; for the Hilbert variant it is the Euclidean norm.
    """
    xstar = _check_last_axis(spec, xstar, 'xstar')
    if spec.is_hilbert:
        return np.sqrt(np.sum(xstar * xstar, axis=-1))
    q_conj = spec.conjugate_exponent
    return np.sum(spec.weights * np.abs(xstar)**q_conj,
                  axis=-1)**(1. / q_conj)


def duality_pair(spec, x, xstar):
    """<x, x*> = sum_s w_s x_s x*_s (unit weights for Hilbert)."""
    x = _check_last_axis(spec, x)
    xstar = _check_last_axis(spec, xstar, 'xstar')
    return np.sum(spec.weights * x * xstar, axis=-1)


@dataclass(frozen=True)
class L2StepFunction:
    """f = sum_{i,k} c[i][k] dt^{-1/2} 1_{I_i} h_k in L^2(0, T; H).

    Parameters
    ----------
    coefficients : array_like, shape (N_t, d_H)
        Coordinates with respect to the orthonormal step basis.
    """
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients, dtype=float)
        if coefficients.ndim != 2:
            raise InputError('coefficients must be 2-d (N_t, d_H), got '
                             'shape {!r}'.format(coefficients.shape))
        object.__setattr__(self, 'coefficients', frozen_array(coefficients))

    @property
    def shape(self):
        return self.coefficients.shape

    def flat(self):
        """Coefficients in column order (i, k) -> i * d_H + k."""
        return self.coefficients.reshape(-1)

    def values(self, grid):
        """Function values f(t) on each bin, shape (N_t, d_H)."""
        return self.coefficients / grid.sqrt_dt


def basis_function(grid, hilbert, i, k):
    """The basis element e_{i,k}."""
    coefficients = np.zeros((grid.n_bins, hilbert.dim))
    coefficients[i, k] = 1.
    return L2StepFunction(coefficients)


def constant_function(grid, hilbert, h):
    """The function t -> h on [0, T]."""
    h = np.asarray(h, dtype=float)
    if h.shape != (hilbert.dim,):
        raise InputError('h must have shape ({},), got {!r}'.format(
            hilbert.dim, h.shape))
    return L2StepFunction(np.tile(h * grid.sqrt_dt, (grid.n_bins, 1)))


def step_function_from_callable(grid, hilbert, f):
    """Project a callable t -> H onto the step basis (midpoint rule)."""
    midpoints = (np.arange(grid.n_bins) + 0.5) * grid.dt
    values = np.array([np.broadcast_to(f(t), (hilbert.dim,))
                       for t in midpoints], dtype=float)
    return L2StepFunction(values * grid.sqrt_dt)


def l2_inner(f, g, grid=None):
    """Inner product in L^2(0, T; H) of two step functions.

    ``grid`` is accepted for symmetry with the other pairings; the basis is
    orthonormal so the product is the Euclidean product of coefficients.
    """
    if f.shape != g.shape:
        raise InputError('shape mismatch: {!r} vs {!r}'.format(
            f.shape, g.shape))
    if grid is not None and f.shape[0] != grid.n_bins:
        raise InputError('step functions have {} bins, grid has {}'.format(
            f.shape[0], grid.n_bins))
    return float(np.sum(f.coefficients * g.coefficients))
