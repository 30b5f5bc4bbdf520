'''Exhaustive binary trees with exact expectations.

A SignTree of depth n enumerates all sign histories of n steps, each step
carrying ``width`` independent symmetric signs. Leaves are ordered with the
first step in the most significant bits, so that all leaves sharing the
history of the first s steps form one contiguous block. Bit 1 stands for
the sign +1.

Expectations are computed by backward induction: every leaf is first paired
with the leaf whose free signs are all flipped, then the block is halved
until one value remains. The order of reduction is fixed, and with integer
or dyadic leaf values every intermediate result is exactly representable.

For the decoupling construction every step holds a "real" block of d_H signs
followed by a "shadow" block of d_H signs. Coefficients only read real
signs of earlier steps.
'''
from __future__ import division

import logging
from dataclasses import dataclass

import numpy as np

from .. import utils
from .errors import BudgetExceededError, InputError
from .spaces import banach_norms

logger = logging.getLogger(__name__)

MAX_TREE_BITS = 24
MAX_PATTERN_DEPTH = 12
MAX_REPRESENTATION_DEPTH = 10
PATTERN_CHUNK = 64


class SignTree(object):
    def __init__(self, depth, d_H=1, dt=1., shadow=False):
        """All sign histories of ``depth`` steps.

        Parameters
        ----------
        depth : int
            Number of steps n >= 1.
        d_H : int, optional
            Signs per step and block.
        dt : float, optional
            Step length; increments are +-sqrt(dt).
        shadow : bool, optional
            Append an independent shadow block of d_H signs to every step.

        Raises
        ------
        BudgetExceededError
            If the tree has more than 2^24 leaves.
        """
        if int(depth) != depth or depth < 1:
            raise InputError('depth must be a positive integer: {!r}'.format(
                depth))
        if int(d_H) != d_H or d_H < 1:
            raise InputError('d_H must be a positive integer: {!r}'.format(
                d_H))
        if not dt > 0:
            raise InputError('dt must be positive: {!r}'.format(dt))
        self.depth = int(depth)
        self.d_H = int(d_H)
        self.dt = float(dt)
        self.shadow = bool(shadow)
        self.width = self.d_H * (2 if self.shadow else 1)
        self.n_bits = self.depth * self.width
        if self.n_bits > MAX_TREE_BITS:
            raise BudgetExceededError('sign tree bits', self.n_bits,
                                      MAX_TREE_BITS)
        self._signs = None

    @property
    def n_leaves(self):
        return 2**self.n_bits

    @property
    def step_scale(self):
        return np.sqrt(self.dt)

    @property
    def probability(self):
        """Probability of a single leaf, an exact power of two."""
        return 2.**-self.n_bits

    @property
    def signs(self):
        """Leaf signs, int8 array of shape (L, depth, width)."""
        if self._signs is None:
            leaves = np.arange(self.n_leaves, dtype=np.int64)
            shifts = np.arange(self.n_bits - 1, -1, -1, dtype=np.int64)
            bits = (leaves[:, None] >> shifts[None, :]) & 1
            signs = (2 * bits - 1).astype(np.int8)
            signs = signs.reshape(self.n_leaves, self.depth, self.width)
            signs.setflags(write=False)
            self._signs = signs
        return self._signs

    @property
    def real_signs(self):
        return self.signs[:, :, :self.d_H]

    @property
    def shadow_signs(self):
        if not self.shadow:
            raise InputError('tree has no shadow block')
        return self.signs[:, :, self.d_H:]

    def increments(self, shadow=False):
        """Increments +-sqrt(dt), shape (L, depth, d_H)."""
        signs = self.shadow_signs if shadow else self.real_signs
        return signs.astype(float) * self.step_scale

    def prefix_index(self, steps):
        """Index of the history of the first ``steps`` steps per leaf."""
        shift = (self.depth - steps) * self.width
        return np.arange(self.n_leaves, dtype=np.int64) >> shift

    def real_prefix_codes(self, steps):
        """Code of the real signs of the first ``steps`` steps per leaf."""
        if steps == 0:
            return np.zeros(self.n_leaves, dtype=np.int64)
        bits = (self.real_signs[:, :steps] > 0).astype(np.int64)
        weights = 2**np.arange(steps * self.d_H - 1, -1, -1, dtype=np.int64)
        return bits.reshape(self.n_leaves, -1).dot(weights)

    def describe(self):
        return 'SignTree(depth={}, d_H={}, shadow={}, leaves={})'.format(
            self.depth, self.d_H, self.shadow, self.n_leaves)


def pairwise_mean(values, axis=1):
    """Mean along an axis of length 2^k by repeated halving."""
    values = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    size = values.shape[0]
    if size & (size - 1):
        raise InputError('pairwise_mean needs a power of two, got {}'.format(
            size))
    while values.shape[0] > 1:
        half = values.shape[0] // 2
        values = (values[:half] + values[half:]) * 0.5
    return np.moveaxis(values, 0, axis).squeeze(axis=axis)


def _leaf_values(tree, functional):
    values = functional(tree) if callable(functional) else functional
    values = np.asarray(values, dtype=float)
    if values.shape[0] != tree.n_leaves:
        raise InputError('expected {} leaf values, got {}'.format(
            tree.n_leaves, values.shape[0]))
    return values


def conditional_expectation(tree, functional, steps):
    """E[values | first ``steps`` steps] per history.

    Parameters
    ----------
    tree : SignTree
        The tree.
    functional : array_like or callable
        Leaf values of shape (L, ...) or a callable tree -> leaf values.
    steps : int
        Number of revealed steps, 0 <= steps <= depth.

    Returns
    -------
    np.ndarray, shape (2^(steps * width), ...)
        Conditional expectations in history order.
    """
    if not 0 <= steps <= tree.depth:
        raise InputError('steps must lie in [0, {}]: {!r}'.format(
            tree.depth, steps))
    values = _leaf_values(tree, functional)
    n_histories = 2**(steps * tree.width)
    values = values.reshape((n_histories, -1) + values.shape[1:])
    if values.shape[1] == 1:
        return values[:, 0]
    # the leaf at j and the leaf at block - 1 - j have all free signs flipped
    half = values.shape[1] // 2
    paired = values[:, :half] + values[:, ::-1][:, :half]
    return pairwise_mean(paired * 0.5, axis=1)


def exact_expectation(tree, functional, p=None, space=None):
    """E[functional] by full enumeration.

    With ``p`` the expectation of ||functional||^p is returned, the norm
    taken in ``space`` for vector values and the absolute value otherwise.
    """
    values = _leaf_values(tree, functional)
    if p is not None:
        values = norm_powers(values, p, space)
    return conditional_expectation(tree, values, 0)[0]


def norm_powers(values, p, space=None):
    """||values||^p along the last axis (absolute values without a space).

    Squared Euclidean norms are summed directly so that integer inputs
    give exact results.
    """
    values = np.asarray(values, dtype=float)
    if space is None:
        return np.abs(values)**p
    if space.is_hilbert and p == 2:
        return np.sum(values * values, axis=-1)
    return banach_norms(space, values)**p


class TreeIntegrand(object):
    def __init__(self, tables, d_H=1):
        """Predictable integrand on a sign tree.

        Parameters
        ----------
        tables : list of array_like
            tables[s] has shape (2^(s * d_H), ...): the value at step s + 1
            for every history of real signs of the steps before it.
        d_H : int, optional
            Real signs per step.
        """
        self.d_H = int(d_H)
        self.tables = [np.asarray(table, dtype=float) for table in tables]
        for s, table in enumerate(self.tables):
            if table.shape[0] != 2**(s * self.d_H):
                raise InputError('table for step {} needs {} rows, got '
                                 '{}'.format(s + 1, 2**(s * self.d_H),
                                             table.shape[0]))
        shapes = set(table.shape[1:] for table in self.tables)
        if len(shapes) > 1:
            raise InputError('tables differ in value shape: {!r}'.format(
                shapes))

    @property
    def depth(self):
        return len(self.tables)

    @property
    def value_shape(self):
        return self.tables[0].shape[1:]

    def leaf_values(self, tree):
        """Integrand per leaf and step, shape (L, depth, ...)."""
        if tree.depth != self.depth or tree.d_H != self.d_H:
            raise InputError('integrand of depth {} and d_H {} does not fit '
                             '{}'.format(self.depth, self.d_H,
                                         tree.describe()))
        columns = [table[tree.real_prefix_codes(s)]
                   for s, table in enumerate(self.tables)]
        return np.stack(columns, axis=1)

    @classmethod
    def random(cls, depth, d_H, value_shape, rng, max_abs=3):
        """Integer-valued tables drawn uniformly from [-max_abs, max_abs]."""
        tables = [rng.integers(-max_abs, max_abs + 1,
                               size=(2**(s * d_H),) + tuple(value_shape))
                  .astype(float) for s in range(depth)]
        return cls(tables, d_H)


def discrete_integral(tree, integrand):
    """sum_n phi_n dw_n per leaf for a predictable integrand on a d_H = 1 tree.

    ``integrand`` is a TreeIntegrand or leaf values of shape (L, depth) or
    (L, depth, d_E).
    """
    if tree.d_H != 1 or tree.shadow:
        raise InputError('discrete_integral needs a plain tree with d_H = 1')
    if isinstance(integrand, TreeIntegrand):
        integrand = integrand.leaf_values(tree)
    integrand = np.asarray(integrand, dtype=float)
    if integrand.shape[:2] != (tree.n_leaves, tree.depth):
        raise InputError('integrand must start with shape {!r}, got '
                         '{!r}'.format((tree.n_leaves, tree.depth),
                                       integrand.shape))
    increments = tree.increments()[:, :, 0]
    increments = increments.reshape(increments.shape +
                                     (1,) * (integrand.ndim - 2))
    return np.sum(integrand * increments, axis=1)


def discrete_representation(tree, functional, atol=0.):
    """Predictable integrand whose discrete integral reproduces a target.

    phi_n = (eta+ - eta-) / (2 sqrt(dt)) with eta+- the conditional
    expectations of the target after an up or down move at step n.

    Parameters
    ----------
    tree : SignTree
        Plain tree with d_H = 1 and depth at most 10.
    functional : array_like or callable
        Target leaf values of shape (L,) or (L, d_E) with mean zero.
    atol : float, optional
        Tolerance on the mean; exact zero by default.

    Returns
    -------
    np.ndarray, shape (L, depth) or (L, depth, d_E)
        The integrand evaluated on every leaf.

    Raises
    ------
    InputError
        If the target mean is not zero.
    BudgetExceededError
        If the tree is deeper than 10 steps.
    """
    if tree.d_H != 1 or tree.shadow:
        raise InputError('discrete_representation needs a plain tree with '
                         'd_H = 1')
    if tree.depth > MAX_REPRESENTATION_DEPTH:
        raise BudgetExceededError('representation depth', tree.depth,
                                  MAX_REPRESENTATION_DEPTH)
    target = _leaf_values(tree, functional)
    mean = conditional_expectation(tree, target, 0)[0]
    if np.max(np.abs(mean)) > atol:
        raise InputError('target must have mean zero, got {!r}; subtract '
                         'the mean first'.format(mean))
    columns = []
    for n in range(1, tree.depth + 1):
        expectations = conditional_expectation(tree, target, n)
        down, up = expectations[0::2], expectations[1::2]
        unit_scale = (up - down) * 0.5
        columns.append(unit_scale[tree.prefix_index(n - 1)])
    return np.stack(columns, axis=1) / tree.step_scale


@dataclass(frozen=True)
class DecouplingTranscript:
    """Sequences d_n, e_n and r_j on every leaf.

    Attributes
    ----------
    d, e : np.ndarray, shape (L, n, d_E)
        The martingale differences and their tangent copy.
    r : np.ndarray, shape (L, 2n, d_E)
        r[:, 2n - 2] = (d_n + e_n) / 2 and r[:, 2n - 1] = (d_n - e_n) / 2.
    """
    d: np.ndarray
    e: np.ndarray
    r: np.ndarray

    @property
    def sum_d(self):
        return self.d.sum(axis=1)

    @property
    def sum_e(self):
        return self.e.sum(axis=1)

    @property
    def sum_r(self):
        return self.r.sum(axis=1)

    @property
    def alternating_sum_r(self):
        signs = np.where(np.arange(self.r.shape[1]) % 2 == 0, 1., -1.)
        return np.einsum('j,lje->le', signs, self.r)

    def pair_defects(self):
        """Largest deviation of r_{2n-1} +- r_{2n} from d_n and e_n."""
        odd, even = self.r[:, 0::2], self.r[:, 1::2]
        return (float(np.max(np.abs(odd + even - self.d))),
                float(np.max(np.abs(odd - even - self.e))))

    def sum_defects(self):
        """Largest deviation in sum d = sum r and sum e = sum (-1)^(j+1) r."""
        return (float(np.max(np.abs(self.sum_d - self.sum_r))),
                float(np.max(np.abs(self.sum_e - self.alternating_sum_r))))


def decoupling_transform(d, e):
    """r_{2n-1} = (d_n + e_n) / 2 and r_{2n} = (d_n - e_n) / 2.

    Parameters
    ----------
    d, e : array_like, shape (L, n, d_E)
        Aligned sequences; e is the tangent copy of d.

    Returns
    -------
    DecouplingTranscript
    """
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    if d.shape != e.shape or d.ndim != 3:
        raise InputError('d and e must be aligned (L, n, d_E) arrays, got '
                         '{!r} and {!r}'.format(d.shape, e.shape))
    r = np.empty((d.shape[0], 2 * d.shape[1], d.shape[2]))
    r[:, 0::2] = (d + e) * 0.5
    r[:, 1::2] = (d - e) * 0.5
    return DecouplingTranscript(d, e, r)


def tangent_sequences(tree, integrand):
    """d_n = Phi_n dW_n and e_n = Phi_n dW~_n on a tree with shadow block.

    ``integrand`` is a TreeIntegrand with values of shape (d_E, d_H).
    """
    if not tree.shadow:
        raise InputError('tangent sequences need a tree with shadow block')
    coefficients = integrand.leaf_values(tree)
    d = np.einsum('lnek,lnk->lne', coefficients, tree.increments())
    e = np.einsum('lnek,lnk->lne', coefficients,
                  tree.increments(shadow=True))
    return d, e


def _shadow_partners(tree, step):
    """Partner leaves for E[. | G_{2n-1}] at the 0-based step.

    The partner swaps real and shadow signs wherever they differ at this step
    and flips every sign of the later steps; it preserves the history before
    the step and the sums dW_n + dW~_n.
    """
    leaves = np.arange(tree.n_leaves, dtype=np.int64)
    real = tree.real_signs[:, step].astype(np.int64)
    shadow = tree.shadow_signs[:, step].astype(np.int64)
    positions = tree.n_bits - 1 - (step * tree.width +
                                   np.arange(tree.width, dtype=np.int64))
    real_bits = np.int64(1) << positions[:tree.d_H]
    shadow_bits = np.int64(1) << positions[tree.d_H:]
    differs = (real != shadow).astype(np.int64)
    mask = differs.dot(real_bits + shadow_bits)
    later = (np.int64(1) << positions[-1]) - 1
    return leaves ^ (mask | later)


def _atom_keys(tree, step):
    """Key of the atom of G_{2n-1} containing each leaf."""
    prefix = tree.prefix_index(step)
    sums = (tree.real_signs[:, step].astype(np.int64) +
            tree.shadow_signs[:, step] + 2)
    weights = 5**np.arange(tree.d_H, dtype=np.int64)
    return prefix * 5**tree.d_H + sums.dot(weights)


def conditional_mean_defects(tree, transcript):
    """max |E[r_j | G_{j-1}]| for every j, computed by enumeration.

    G_{2n-2} reveals both sign blocks of the first n - 1 steps; G_{2n-1}
    additionally reveals dW_n + dW~_n. For a genuine tangent pair (d, e) the
    entries r_{2n} change sign under the swap of real and shadow signs, so
    their defects vanish identically; they flag e that is not a tangent copy
    of d.

    Returns
    -------
    np.ndarray, shape (2n,)
    """
    defects = np.empty(transcript.r.shape[1])
    for step in range(tree.depth):
        odd = transcript.r[:, 2 * step]
        defects[2 * step] = np.max(np.abs(
            conditional_expectation(tree, odd, step)))

        even = transcript.r[:, 2 * step + 1]
        paired = (even + even[_shadow_partners(tree, step)]) * 0.5
        keys, inverse, counts = np.unique(_atom_keys(tree, step),
                                          return_inverse=True,
                                          return_counts=True)
        totals = np.zeros((len(keys),) + even.shape[1:])
        np.add.at(totals, inverse, paired)
        means = totals / counts.reshape((-1,) + (1,) * (even.ndim - 1))
        defects[2 * step + 1] = np.max(np.abs(means))
    return defects


@dataclass(frozen=True)
class UMDRatioEstimate:
    """Largest sign-transform ratio found; a lower bound for beta_{p,E}."""
    p: float
    depth: int
    trials: int
    max_ratio: float
    pattern: tuple


def _pattern_moments(differences, patterns, space, p):
    """E||sum_j eps_j d_j||^p for every pattern, shape (P,)."""
    moments = []
    for start in range(0, len(patterns), PATTERN_CHUNK):
        chunk = patterns[start:start + PATTERN_CHUNK]
        transforms = np.einsum('pj,ljd->lpd', chunk, differences)
        moments.append(pairwise_mean(norm_powers(transforms, p, space),
                                     axis=0))
    return np.concatenate(moments)


def umd_ratio(space, p, depth, trials, seed, max_abs=3):
    """Search sign transforms of tree martingales for a large moment ratio.

    For each trial an integer-valued martingale difference sequence
    d_j = v_j(history) s_j is drawn on a d_H = 1 tree; every pattern
    eps in {-1, 1}^depth is applied and the ratio
    (E||sum eps_j d_j||^p / E||sum d_j||^p)^{1/p} is computed exactly.

    Raises
    ------
    BudgetExceededError
        If depth > 12.
    """
    if depth > MAX_PATTERN_DEPTH:
        raise BudgetExceededError('sign pattern depth', depth,
                                  MAX_PATTERN_DEPTH)
    if trials < 1:
        raise InputError('trials must be >= 1: {!r}'.format(trials))
    if not 1. <= p < np.inf:
        raise InputError('p must lie in [1, inf): {!r}'.format(p))
    tree = SignTree(depth)
    leaves = np.arange(2**depth, dtype=np.int64)
    patterns = (((leaves[:, None] >> np.arange(depth - 1, -1, -1)) & 1) *
                2 - 1).astype(float)
    all_ones = len(patterns) - 1

    best_ratio, best_pattern = -np.inf, None
    for trial in range(trials):
        rng = utils.create_random_stream(seed, 'umd', trial)
        integrand = TreeIntegrand.random(depth, 1, (space.dim,), rng,
                                         max_abs)
        differences = (integrand.leaf_values(tree) *
                       tree.real_signs.astype(float))
        moments = _pattern_moments(differences, patterns, space, p)
        reference = moments[all_ones]
        if reference == 0.:
            continue
        ratios = (moments / reference)**(1. / p)
        index = int(np.argmax(ratios))
        logger.debug('umd trial %d: max ratio %r', trial, ratios[index])
        if ratios[index] > best_ratio:
            best_ratio = float(ratios[index])
            best_pattern = tuple(int(s) for s in patterns[index])
    if best_pattern is None:
        best_ratio, best_pattern = 1., tuple([1] * depth)
    return UMDRatioEstimate(float(p), depth, trials, best_ratio, best_pattern)
