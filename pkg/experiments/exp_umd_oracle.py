'''Exact checks on enumerated sign trees.

Everything here is computed by full enumeration with integer or dyadic
values, so every predicate holds with zero tolerance: the decoupling
transform identities, E[r_j | G_{j-1}] = 0, a search for large
sign-transform ratios, and the discrete martingale representation.
'''
from __future__ import division

import logging

import numpy as np

from . import utils
from .resources.report import make_report
from .resources.sign_tree import (MAX_REPRESENTATION_DEPTH, SignTree,
                                  TreeIntegrand, conditional_mean_defects,
                                  decoupling_transform, discrete_integral,
                                  discrete_representation, exact_expectation,
                                  tangent_sequences, umd_ratio)
from .resources.spaces import BanachSpaceSpec
from .resources.statistics import MomentEstimate

logger = logging.getLogger(__name__)

DECOUPLING_ANCHOR = 'decoupling transform of tangent sequences'
UMD_ANCHOR = 'UMD sign transforms'
REPRESENTATION_ANCHOR = 'discrete martingale representation'
DECOUPLING = ('sum d = sum r and sum e = sum (-1)^(j+1) r per leaf; '
              'E[r_j | G_(j-1)] = 0; exact')
DECOUPLING_HILBERT = DECOUPLING + '; E||sum d||^2 = E||sum e||^2'
UMD = 'max sign-transform ratio >= 1; scalar p = 2 ratio = 1; exact'
SQUARE = 'W(T)^2 - T represented by phi_n = 2 W(t_(n-1)); exact'
ROUNDTRIP = 'represent(integrate(phi)) = phi on {} integrands; exact'
REPRESENTATION_DT = 0.25


def exact_moment(tree, values, p, space=None):
    moment = exact_expectation(tree, values, p, space)
    return MomentEstimate.exact(moment**(1. / p), p)


def decoupling_rows(cfg):
    tree = SignTree(cfg.oracle_depth, shadow=True)
    hilbert_square = cfg.space.is_hilbert and cfg.p == 2.
    predicate = DECOUPLING_HILBERT if hilbert_square else DECOUPLING
    rows = []
    for index in range(cfg.n_processes):
        rng = utils.create_random_stream(cfg.seed, 'oracle', index)
        integrand = TreeIntegrand.random(cfg.oracle_depth, 1,
                                         (cfg.space.dim, 1), rng)
        transcript = decoupling_transform(*tangent_sequences(tree,
                                                             integrand))
        defects = (transcript.pair_defects() + transcript.sum_defects() +
                   tuple(conditional_mean_defects(tree, transcript)))
        lhs = exact_moment(tree, transcript.sum_d, cfg.p, cfg.space)
        rhs = exact_moment(tree, transcript.sum_e, cfg.p, cfg.space)
        passed = max(defects) == 0.
        if hilbert_square:
            passed = passed and lhs.value == rhs.value
        logger.info('umd_oracle decoupling %d: largest defect %r', index,
                    max(defects))
        rows.append(make_report(cfg, 'umd_oracle', DECOUPLING_ANCHOR, lhs,
                                rhs, predicate, passed, M=tree.n_leaves))
    return rows


def umd_row(cfg):
    estimate = umd_ratio(cfg.space, cfg.p, cfg.oracle_depth,
                         cfg.n_processes, cfg.seed)
    scalar = umd_ratio(BanachSpaceSpec.hilbert(1), 2., cfg.oracle_depth,
                       cfg.n_processes, cfg.seed)
    logger.info('umd_oracle: max ratio %r for pattern %r',
                estimate.max_ratio, estimate.pattern)
    passed = estimate.max_ratio >= 1. and scalar.max_ratio == 1.
    return make_report(cfg, 'umd_oracle', UMD_ANCHOR,
                       MomentEstimate.exact(estimate.max_ratio, cfg.p),
                       MomentEstimate.exact(1., cfg.p), UMD, passed,
                       M=2**cfg.oracle_depth)


def representation_rows(cfg):
    depth = min(cfg.oracle_depth, MAX_REPRESENTATION_DEPTH)
    tree = SignTree(depth, dt=REPRESENTATION_DT)
    increments = tree.increments()[:, :, 0]
    paths = np.cumsum(increments, axis=1)
    horizon = depth * REPRESENTATION_DT
    target = paths[:, -1]**2 - horizon

    phi = discrete_representation(tree, target)
    previous = np.concatenate([np.zeros((tree.n_leaves, 1)),
                               paths[:, :-1]], axis=1)
    passed = (np.array_equal(phi, 2. * previous) and
              np.array_equal(discrete_integral(tree, phi), target))
    square = exact_moment(tree, target, 2.)
    rows = [make_report(cfg, 'umd_oracle', REPRESENTATION_ANCHOR, square,
                        square, SQUARE, passed, p=2., T=horizon, N_t=depth,
                        M=tree.n_leaves)]

    roundtrips = []
    for index in range(cfg.n_processes):
        rng = utils.create_random_stream(cfg.seed, 'oracle',
                                         cfg.n_processes + index)
        integrand = TreeIntegrand.random(depth, 1, (cfg.space.dim,), rng)
        values = integrand.leaf_values(tree)
        integral = discrete_integral(tree, values)
        roundtrips.append(np.array_equal(
            discrete_representation(tree, integral), values))
    norm = exact_moment(tree, integral, 2., cfg.space)
    rows.append(make_report(cfg, 'umd_oracle', REPRESENTATION_ANCHOR, norm,
                            norm, ROUNDTRIP.format(cfg.n_processes),
                            all(roundtrips), p=2., T=horizon, N_t=depth,
                            M=tree.n_leaves))
    return rows


def run(cfg):
    return decoupling_rows(cfg) + [umd_row(cfg)] + representation_rows(cfg)
