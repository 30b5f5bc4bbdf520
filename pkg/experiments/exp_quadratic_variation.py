'''Quadratic variation of scalar integrals.

For scalar-valued Phi, E(int_0^t Phi dW_H)^2 = E int_0^t ||Phi||^2_H ds at
every grid point. The check is paired: per path the squared integral minus
the running clock has mean zero in every bin.
'''
from __future__ import division

import logging

import numpy as np

from . import utils
from .resources.generators import process_stream, random_adapted_process
from .resources.integrals import integral_process, quadratic_variation
from .resources.report import make_report
from .resources.spaces import BanachSpaceSpec
from .resources.statistics import estimate_moment, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'quadratic variation identity'
PREDICATE = ('E Y(t_i)^2 = E sum_(j<i) dt ||Phi_j||^2 in every bin within '
             '{:g} sigma')


def bin_scores(squares, clock):
    """|mean(Y^2 - clock)| / stderr per grid point after t_0."""
    differences = (squares - clock)[:, 1:]
    mean = differences.mean(axis=0)
    error = differences.std(axis=0, ddof=1) / np.sqrt(len(differences))
    scores = np.zeros_like(mean)
    nonzero = error > 0
    scores[nonzero] = np.abs(mean[nonzero]) / error[nonzero]
    scores[~nonzero & (mean != 0)] = np.inf
    return scores


def run(cfg):
    scalar = BanachSpaceSpec.hilbert(1)
    bundle = utils.sample_bundle(cfg)
    predicate = PREDICATE.format(cfg.ci_sigmas)
    rows = []
    for index in range(cfg.n_processes):
        process = random_adapted_process(cfg.grid, cfg.hilbert, scalar,
                                         process_stream(cfg.seed, index))
        values = integral_process(process, bundle).trajectories[:, :, 0]
        clock = quadratic_variation(process, bundle)
        score = float(np.max(bin_scores(values**2, clock)))

        lhs = estimate_moment(np.abs(values[:, -1]), 2.)
        rhs = estimate_moment(np.sqrt(clock[:, -1]), 2.)
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)
        logger.info('quadratic_variation %d: largest score %r', index, score)
        rows.append(make_report(cfg, 'quadratic_variation', ANCHOR, lhs, rhs,
                                predicate, score <= cfg.ci_sigmas,
                                ratio=ratio, p=2., space_variant='hilbert',
                                d_E=1, q=2.))
    return rows
