'''Ito isometry for deterministic integrands.

E||int Phi dW_H||^2 is compared with the squared gamma norm of the
represented operator X_Phi. For deterministic Phi the integral is a
centred Gaussian variable with covariance X_Phi X_Phi^*, so the identity
holds in every target space; Hilbert targets get the exact Frobenius norm.
'''
from __future__ import division

import logging

from . import utils
from .resources.gamma_ops import gamma_norm
from .resources.generators import process_stream, random_deterministic_process
from .resources.integrals import integrate, represent
from .resources.report import make_report
from .resources.spaces import banach_norms
from .resources.statistics import (MomentEstimate, estimate_moment,
                                   ratio_interval)

logger = logging.getLogger(__name__)

ANCHOR = 'Ito isometry for deterministic integrands'
PREDICATE = 'E||int Phi dW||^2 = ||X_Phi||^2_gamma within {:g} sigma'


def run(cfg):
    bundle = utils.sample_bundle(cfg)
    predicate = PREDICATE.format(cfg.ci_sigmas)
    rows = []
    for index in range(cfg.n_processes):
        process = random_deterministic_process(
            cfg.grid, cfg.hilbert, cfg.space, process_stream(cfg.seed, index))
        values = integrate(process, bundle)
        lhs = estimate_moment(banach_norms(cfg.space, values), 2.)

        # X_Phi is the same operator on every path
        X = represent(process, 0, bundle)
        estimate = gamma_norm(X, seed=utils.derived_seed(cfg.seed, index),
                              **utils.mc_options(cfg))
        rhs = MomentEstimate.from_gamma_estimate(estimate)

        lhs, rhs = lhs.power(2.), rhs.power(2.)
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)
        logger.info('ito_isometry %d: ratio %r', index, ratio[0])
        rows.append(make_report(cfg, 'ito_isometry', ANCHOR, lhs, rhs,
                                predicate, utils.ci_contains(ratio),
                                ratio=ratio, p=2.))
    return rows
