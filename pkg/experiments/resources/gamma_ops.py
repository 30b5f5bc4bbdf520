'''gamma-radonifying operators from discretized L^2(0, T; H) into E.

An operator is stored as a dense d_E x (N_t * d_H) matrix acting on the
coefficients of a step function; column i * d_H + k is the image of the
basis element e_{i,k}.
'''
from __future__ import division

import logging
from dataclasses import dataclass

import numpy as np

from .. import utils
from .errors import InputError, UnsupportedMethodError
from .parallel import BlockPool
from .spaces import (BanachSpaceSpec, L2StepFunction, banach_norms,
                     frozen_array)

logger = logging.getLogger(__name__)

EXACT_HILBERT = 'exact_hilbert'
GAUSSIAN_MC = 'gaussian_mc'
SQUARE_FUNCTION = 'square_function'
METHODS = (EXACT_HILBERT, GAUSSIAN_MC, SQUARE_FUNCTION)

# below this second moment the delta method is not applied
SMALL_MOMENT = 1e-12


@dataclass(frozen=True)
class GammaOperator:
    """Matrix realization of R in gamma(L^2(0, T; H), E).

    Parameters
    ----------
    matrix : array_like, shape (d_E, N_t * d_H)
        Images of the step basis.
    grid : TimeGrid
        The time grid.
    hilbert : HilbertSpec
        The space H.
    space : BanachSpaceSpec
        The target space E.
    """
    matrix: np.ndarray
    grid: object
    hilbert: object
    space: BanachSpaceSpec

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        expected = (self.space.dim, self.grid.n_bins * self.hilbert.dim)
        if matrix.shape != expected:
            raise InputError('operator matrix must have shape {!r}, got '
                             '{!r}'.format(expected, matrix.shape))
        object.__setattr__(self, 'matrix', frozen_array(matrix))

    @classmethod
    def zeros(cls, grid, hilbert, space):
        return cls(np.zeros((space.dim, grid.n_bins * hilbert.dim)),
                   grid, hilbert, space)

    @classmethod
    def rank_one(cls, f, x, grid, hilbert, space):
        """The operator g -> [g, f] x."""
        x = np.asarray(x, dtype=float)
        return cls(np.outer(x, f.flat()), grid, hilbert, space)

    @classmethod
    def from_blocks(cls, blocks, grid, hilbert, space):
        """Build from per-bin blocks of shape (N_t, d_E, d_H)."""
        blocks = np.asarray(blocks, dtype=float)
        matrix = np.transpose(blocks, (1, 0, 2)).reshape(space.dim, -1)
        return cls(matrix, grid, hilbert, space)

    @property
    def n_columns(self):
        return self.matrix.shape[1]

    @property
    def blocks(self):
        """Column blocks per bin, shape (N_t, d_E, d_H)."""
        return np.transpose(self.matrix.reshape(
            self.space.dim, self.grid.n_bins, self.hilbert.dim), (1, 0, 2))

    def apply(self, f):
        if not isinstance(f, L2StepFunction):
            f = L2StepFunction(f)
        if f.shape != (self.grid.n_bins, self.hilbert.dim):
            raise InputError('step function shape {!r} does not match the '
                             'operator'.format(f.shape))
        return self.matrix.dot(f.flat())

    def with_space(self, space):
        return GammaOperator(self.matrix, self.grid, self.hilbert, space)

    def same_specs(self, other):
        return (self.grid == other.grid and self.hilbert == other.hilbert
                and self.space == other.space)


@dataclass(frozen=True)
class GammaNormEstimate:
    """Value of a gamma norm evaluation."""
    value: float
    standard_error: float
    samples: int
    method: str

    @property
    def is_exact(self):
        return self.method != GAUSSIAN_MC


def _require_hilbert(R, what):
    if not R.space.is_hilbert:
        raise UnsupportedMethodError(
            '{} needs a Hilbert target, got {}'.format(
                what, R.space.describe()))


def gamma_norm_exact(R):
    """Hilbert-Schmidt (Frobenius) norm; equals the gamma norm for Hilbert E.
    """
    _require_hilbert(R, 'gamma_norm_exact')
    return float(np.linalg.norm(R.matrix))


def square_function_norm(R):
    """Square function norm || (int_0^T ||phi(t, .)||_H^2 dt)^{1/2} ||_{L^q}.

    The kernel is phi(t_i, s)[k] = dt^{-1/2} A[s, (i, k)], hence the inner
    integral reduces to the squared row norms of A.
    """
    if R.space.is_hilbert:
        raise UnsupportedMethodError(
            'square_function_norm needs an L^q target, got {}'.format(
                R.space.describe()))
    row_norms = np.sqrt(np.sum(R.matrix**2, axis=1))
    return float(banach_norms(R.space, row_norms))


def _squared_image_norms(task):
    """Squared norms of sum_n gamma_n R b_n for one block of samples."""
    seed, block, n_rows, matrix, space, method = task
    rng = utils.create_random_stream(seed, 'gamma_mc', block)
    gaussians = utils.standard_normal(rng, (n_rows, matrix.shape[1]),
                                      method)
    images = gaussians.dot(matrix.T)
    return banach_norms(space, images)**2


def _squared_bin_norms(task):
    """Squared norms of Phi_i gamma_i per time bin for one block of samples."""
    seed, block, n_rows, blocks, space, method = task
    n_bins, _, d_H = blocks.shape
    rng = utils.create_random_stream(seed, 'gamma_mc', block)
    gaussians = utils.standard_normal(rng, (n_rows, n_bins * d_H), method)
    gaussians = gaussians.reshape(n_rows, n_bins, d_H)
    images = np.einsum('nik,iek->nie', gaussians, blocks)
    return banach_norms(space, images)**2


def moment_estimate(squares, method=GAUSSIAN_MC):
    """Root of a second moment with a delta-method standard error.

    Parameters
    ----------
    squares : np.ndarray
        Samples of ||.||^2.

    Returns
    -------
    GammaNormEstimate
        sqrt of the sample mean with its standard error.
    """
    n_samples = len(squares)
    second_moment = float(np.mean(squares))
    moment_error = float(np.std(squares, ddof=1) / np.sqrt(n_samples))
    if second_moment < SMALL_MOMENT:
        return GammaNormEstimate(np.sqrt(second_moment), moment_error,
                                 n_samples, method)
    value = np.sqrt(second_moment)
    return GammaNormEstimate(value, moment_error / (2. * value), n_samples,
                             method)


def gaussian_image_squares(matrix, space, n_samples, seed,
                           gaussian_method='ziggurat', block_size=4096,
                           workers=1):
    """Samples of ||A gamma||^2 for standard Gaussian vectors gamma."""
    tasks = [(seed, block, stop - start, matrix, space, gaussian_method)
             for block, (start, stop) in enumerate(
                 utils.split_blocks(n_samples, block_size))]
    return np.concatenate(BlockPool(workers).map(_squared_image_norms,
                                                 tasks))


def gamma_norm_mc(R, n_samples, seed, gaussian_method='ziggurat',
                  block_size=4096, workers=1, basis=None):
    """Monte Carlo estimate of (E || sum_n gamma_n R e_n ||^2)^{1/2}.

    Parameters
    ----------
    R : GammaOperator
        The operator.
    n_samples : int
        Number of Gaussian series samples, at least 2.
    seed : int
        Master seed.
    gaussian_method : str, optional
        'ziggurat' or 'inverse_cdf'.
    block_size : int, optional
        Samples per random stream block.
    workers : int, optional
        Worker processes; never changes the result.
    basis : array_like, optional
        Orthogonal matrix whose columns replace the canonical step basis.

    Returns
    -------
    GammaNormEstimate
    """
    if n_samples < 2:
        raise InputError('n_samples must be >= 2: {!r}'.format(n_samples))
    matrix = R.matrix
    if basis is not None:
        basis = np.asarray(basis, dtype=float)
        if basis.shape != (R.n_columns, R.n_columns):
            raise InputError('basis must be {0}x{0}'.format(R.n_columns))
        matrix = matrix.dot(basis)
    squares = gaussian_image_squares(matrix, R.space, n_samples, seed,
                                     gaussian_method, block_size, workers)
    return moment_estimate(squares)


def gamma_norm(R, method=None, n_samples=20000, seed=0, **mc_options):
    """Evaluate a gamma norm with any of the three methods.

    ``method`` defaults to the exact evaluator for Hilbert targets and to
    Monte Carlo otherwise.
    """
    if method is None:
        method = EXACT_HILBERT if R.space.is_hilbert else GAUSSIAN_MC
    if method == EXACT_HILBERT:
        return GammaNormEstimate(gamma_norm_exact(R), 0., 0, method)
    elif method == SQUARE_FUNCTION:
        return GammaNormEstimate(square_function_norm(R), 0., 0, method)
    elif method == GAUSSIAN_MC:
        return gamma_norm_mc(R, n_samples, seed, **mc_options)
    raise UnsupportedMethodError('Unknown method: {!r}'.format(method))


def compose_ideal(B2, R, B1, target=None):
    """The operator B2 R B1.

    Parameters
    ----------
    B2 : array_like or None
        Matrix d_E' x d_E acting on E (identity if None).
    R : GammaOperator
        The operator.
    B1 : array_like or None
        Square matrix acting on step-function coefficients (identity if
        None).
    target : BanachSpaceSpec, optional
        Target space of the composition. Defaults to R's target when B2 is
        square, otherwise a space of the same variant and exponent with
        unit weights.
    """
    matrix = R.matrix
    if B1 is not None:
        B1 = np.asarray(B1, dtype=float)
        if B1.shape != (R.n_columns, R.n_columns):
            raise InputError('B1 must have shape {!r}, got {!r}'.format(
                (R.n_columns, R.n_columns), B1.shape))
        matrix = matrix.dot(B1)
    if B2 is not None:
        B2 = np.asarray(B2, dtype=float)
        if B2.ndim != 2 or B2.shape[1] != R.space.dim:
            raise InputError('B2 must have {} columns, got shape {!r}'.format(
                R.space.dim, B2.shape))
        matrix = B2.dot(matrix)
    if target is None:
        if matrix.shape[0] == R.space.dim:
            target = R.space
        else:
            target = BanachSpaceSpec(R.space.variant, matrix.shape[0],
                                     R.space.q)
    return GammaOperator(matrix, R.grid, R.hilbert, target)


def truncate_time(R, t):
    """xi_R(t): f -> R(1_{[0, t]} f), with t snapped to the grid."""
    index = R.grid.snap(t)
    return truncate_index(R, index)


def truncate_index(R, index):
    """Keep the column blocks of bins 0, ..., index - 1."""
    if not 0 <= index <= R.grid.n_bins:
        raise InputError('grid index {!r} outside [0, {}]'.format(
            index, R.grid.n_bins))
    matrix = np.array(R.matrix)
    matrix[:, index * R.hilbert.dim:] = 0.
    return GammaOperator(matrix, R.grid, R.hilbert, R.space)


def right_translate(R, delta):
    """R^delta f := R f_delta with f_delta the left translate of f."""
    shift = R.grid.snap_shift(delta)
    matrix = np.zeros_like(R.matrix)
    if shift < R.grid.n_bins:
        d_H = R.hilbert.dim
        keep = (R.grid.n_bins - shift) * d_H
        matrix[:, shift * d_H:] = R.matrix[:, :keep]
    return GammaOperator(matrix, R.grid, R.hilbert, R.space)


def operator_integral(R, increments):
    """Ito map on an elementary operator.

    sum_{i,k} R e_{i,k} W_H(e_{i,k}) with W_H(e_{i,k}) = dW[i][k] / sqrt(dt).

    Parameters
    ----------
    increments : array_like, shape (N_t, d_H) or (M, N_t, d_H)

    Returns
    -------
    np.ndarray, shape (d_E,) or (M, d_E)
    """
    increments = np.asarray(increments, dtype=float)
    shape = (R.grid.n_bins, R.hilbert.dim)
    if increments.shape[-2:] != shape:
        raise InputError('increments must end in shape {!r}, got '
                         '{!r}'.format(shape, increments.shape))
    coordinates = increments.reshape(increments.shape[:-2] + (-1,))
    return coordinates.dot(R.matrix.T) / R.grid.sqrt_dt


def block_gamma_norms(blocks, space):
    """gamma(H, E) norms of d_E x d_H blocks along the last two axes.

    Exact for a Hilbert target; for L^q targets the equivalent square
    function norm || (sum_k |b(., k)|^2)^{1/2} ||_{L^q} is returned.
    """
    blocks = np.asarray(blocks, dtype=float)
    if space.is_hilbert:
        return np.sqrt(np.sum(blocks**2, axis=(-2, -1)))
    return banach_norms(space, np.sqrt(np.sum(blocks**2, axis=-1)))


def running_gamma_norms(blocks, space):
    """Norms of xi(t_0), ..., xi(t_N) from scaled blocks.

    Parameters
    ----------
    blocks : array_like, shape (..., N_t, d_E, d_H)
        Column blocks (sqrt(dt) times the process values).
    space : BanachSpaceSpec
        The target space.

    Returns
    -------
    np.ndarray, shape (..., N_t + 1)
        Exact gamma norms for Hilbert targets, square function norms for
        L^q targets. Nondecreasing along the last axis.
    """
    blocks = np.asarray(blocks, dtype=float)
    squares = np.sum(blocks**2, axis=-1)
    running = np.cumsum(squares, axis=-2)
    zero = np.zeros(running.shape[:-2] + (1, running.shape[-1]))
    running = np.concatenate([zero, running], axis=-2)
    if space.is_hilbert:
        return np.sqrt(np.sum(running, axis=-1))
    return banach_norms(space, np.sqrt(running))


def truncation_norms(R):
    """||xi_R(t_i)|| for i = 0, ..., N_t (exact or square function)."""
    return running_gamma_norms(R.blocks, R.space)


def truncation_defects(R):
    """||R - xi_R(t_i)|| for i = 0, ..., N_t; zero at i = N_t."""
    blocks = R.blocks
    tail = blocks[::-1]
    norms = running_gamma_norms(tail, R.space)
    return norms[::-1]


def time_l2_gamma_norm(R, method=None, n_samples=20000, seed=0,
                       gaussian_method='ziggurat', block_size=4096,
                       workers=1):
    """Norm of the kernel in L^2(0, T; gamma(H, E)).

    (sum_i dt ||Phi_i||^2_{gamma(H, E)})^{1/2} where the column block i of
    the matrix is sqrt(dt) Phi_i. With the Monte Carlo method the Gaussian
    draws coincide with those of ``gamma_norm_mc`` for the same seed.
    """
    if method is None:
        method = EXACT_HILBERT if R.space.is_hilbert else GAUSSIAN_MC
    if method == EXACT_HILBERT:
        _require_hilbert(R, 'time_l2_gamma_norm')
        return GammaNormEstimate(float(np.linalg.norm(R.matrix)), 0., 0,
                                 method)
    elif method == SQUARE_FUNCTION:
        value = np.sqrt(np.sum(block_gamma_norms(R.blocks, R.space)**2))
        return GammaNormEstimate(float(value), 0., 0, method)
    elif method != GAUSSIAN_MC:
        raise UnsupportedMethodError('Unknown method: {!r}'.format(method))

    tasks = [(seed, block, stop - start, R.blocks, R.space, gaussian_method)
             for block, (start, stop) in enumerate(
                 utils.split_blocks(n_samples, block_size))]
    per_bin = np.concatenate(BlockPool(workers).map(_squared_bin_norms,
                                                    tasks))
    moments = per_bin.mean(axis=0)
    errors = per_bin.std(axis=0, ddof=1) / np.sqrt(n_samples)
    total = float(np.sum(moments))
    total_error = float(np.sqrt(np.sum(errors**2)))
    if total < SMALL_MOMENT:
        return GammaNormEstimate(np.sqrt(total), total_error, n_samples,
                                 method)
    value = np.sqrt(total)
    return GammaNormEstimate(value, total_error / (2. * value), n_samples,
                             method)


def _product_norms(norms, weights, p):
    return np.sum(weights[:, None] * norms**p, axis=0)**(1. / p)


def gamma_fubini_compare(operators, weights, p, n_samples=20000, seed=0,
                         gaussian_method='ziggurat', block_size=4096):
    """Compare ||X||_{L^p(S; gamma)} with ||F_gamma(X)||_{gamma(L^p(S; E))}.

    Parameters
    ----------
    operators : list of GammaOperator
        X(s) for the points s of a finite probability space S.
    weights : array_like
        Probabilities of the points, summing to 1.
    p : float
        Exponent in [1, inf).

    Returns
    -------
    tuple of GammaNormEstimate
        (lhs, rhs). For p = 2 and a Hilbert target both sides are computed
        exactly; otherwise gamma norms are Monte Carlo estimates and the
        right-hand side uses one Gaussian series shared by all points.
    """
    weights = np.asarray(weights, dtype=float)
    if len(operators) == 0 or weights.shape != (len(operators),):
        raise InputError('need one weight per operator')
    if np.any(weights < 0) or abs(np.sum(weights) - 1.) > 1e-12:
        raise InputError('weights must be a probability vector, sum is '
                         '{!r}'.format(np.sum(weights)))
    if not 1. <= p < np.inf:
        raise InputError('p must lie in [1, inf): {!r}'.format(p))
    first = operators[0]
    if not all(first.same_specs(other) for other in operators[1:]):
        raise InputError('all operators must share grid and spaces')

    hilbert_target = first.space.is_hilbert
    if hilbert_target:
        norms = np.array([gamma_norm_exact(X) for X in operators])
        norm_errors = np.zeros_like(norms)
        lhs_samples = 0
    else:
        estimates = [gamma_norm_mc(X, n_samples,
                                   (seed + 1 + index) % utils.MAX_SEED,
                                   gaussian_method, block_size)
                     for index, X in enumerate(operators)]
        norms = np.array([e.value for e in estimates])
        norm_errors = np.array([e.standard_error for e in estimates])
        lhs_samples = n_samples
    lhs_value = float(np.sum(weights * norms**p)**(1. / p))
    if lhs_value > 0:
        gradient = lhs_value**(1. - p) * weights * norms**(p - 1.)
        lhs_error = float(np.sqrt(np.sum((gradient * norm_errors)**2)))
    else:
        lhs_error = float(np.sqrt(np.sum(norm_errors**2)))
    lhs = GammaNormEstimate(lhs_value, lhs_error, lhs_samples,
                            EXACT_HILBERT if hilbert_target else GAUSSIAN_MC)

    if hilbert_target and p == 2:
        # L^2(S; E) is a Hilbert space: stack sqrt(w_s) X(s)
        stacked = np.vstack([np.sqrt(w) * X.matrix
                             for w, X in zip(weights, operators)])
        assembled = GammaOperator(stacked, first.grid, first.hilbert,
                                  BanachSpaceSpec.hilbert(stacked.shape[0]))
        rhs = GammaNormEstimate(gamma_norm_exact(assembled), 0., 0,
                                EXACT_HILBERT)
        return lhs, rhs

    squares = []
    for block, (start, stop) in enumerate(
            utils.split_blocks(n_samples, block_size)):
        rng = utils.create_random_stream(seed, 'fubini', block)
        gaussians = utils.standard_normal(
            rng, (stop - start, first.n_columns), gaussian_method)
        norms_per_point = np.array([
            banach_norms(X.space, gaussians.dot(X.matrix.T))
            for X in operators])
        squares.append(_product_norms(norms_per_point, weights, p)**2)
    rhs = moment_estimate(np.concatenate(squares))
    return lhs, rhs
