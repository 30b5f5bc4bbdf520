'''Type and cotype directions between gamma(L^2(0,T;H), E) and
L^2(0,T; gamma(H, E)).

For E = L^q with q >= 2 the gamma norm of X_Phi is dominated by the
L^2-in-time norm of Phi; for q <= 2 the domination is reversed. The bounds
follow from the Gaussian Khintchine equality in L^q and Minkowski's
inequality: K = ||g||_q / ||g||_1 for q >= 2 and K = 1 / ||g||_1 for
q <= 2, g a standard normal variable.
'''
from __future__ import division

import logging

import numpy as np
from scipy import special

from . import utils
from .resources.gamma_ops import gamma_norm, time_l2_gamma_norm
from .resources.generators import process_stream, random_deterministic_process
from .resources.integrals import deterministic_operator
from .resources.report import make_report
from .resources.statistics import MomentEstimate, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'type 2 and cotype 2 embeddings'
EQUALITY = 'Hilbert E: ||X_Phi||_gamma = ||Phi||_{L^2(gamma)} to tolerance'
TYPE = ('type 2: ||X_Phi||_gamma <= K ||Phi||_{{L^2(gamma)}}, '
        'K = {:.6g}; observed max {{:.6g}}')
COTYPE = ('cotype 2: ||Phi||_{{L^2(gamma)}} <= K ||X_Phi||_gamma, '
          'K = {:.6g}; observed max {{:.6g}}')


def gaussian_norm(q):
    """(E|g|^q)^{1/q} for a standard normal g."""
    return (2.**(q / 2.) * special.gamma((q + 1.) / 2.) /
            np.sqrt(np.pi))**(1. / q)


def domination_constant(q):
    if q >= 2.:
        return gaussian_norm(q) / gaussian_norm(1.)
    return 1. / gaussian_norm(1.)


def run(cfg):
    q = cfg.space.q
    cotype = not cfg.space.is_hilbert and q < 2.
    sides = []
    for index in range(cfg.n_processes):
        process = random_deterministic_process(
            cfg.grid, cfg.hilbert, cfg.space, process_stream(cfg.seed, index))
        X = deterministic_operator(process)
        # same seed: both norms see the same Gaussian draws
        seed = utils.derived_seed(cfg.seed, index)
        gamma = MomentEstimate.from_gamma_estimate(
            gamma_norm(X, seed=seed, **utils.mc_options(cfg)))
        in_time = MomentEstimate.from_gamma_estimate(
            time_l2_gamma_norm(X, seed=seed, **utils.mc_options(cfg)))
        sides.append((in_time, gamma) if cotype else (gamma, in_time))

    ratios = [ratio_interval(lhs, rhs, cfg.ci_sigmas) for lhs, rhs in sides]
    observed = max(r[0] for r in ratios)
    rows = []
    for (lhs, rhs), ratio in zip(sides, ratios):
        if cfg.space.is_hilbert:
            predicate = EQUALITY
            passed = abs(lhs.value - rhs.value) <= cfg.tolerance * max(
                1., rhs.value)
        else:
            bound = domination_constant(q)
            predicate = (COTYPE if cotype else TYPE).format(bound).format(
                observed)
            passed = ratio[1] <= bound
        rows.append(make_report(cfg, 'type_cotype', ANCHOR, lhs, rhs,
                                predicate, passed, ratio=ratio, p=2.))
    logger.info('type_cotype: observed constant %r', observed)
    return rows
