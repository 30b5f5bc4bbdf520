'''Square function norm against the Monte Carlo gamma norm, L^q targets.'''
from __future__ import division

import logging

import numpy as np

from . import utils
from .resources.errors import InputError
from .resources.gamma_ops import gamma_norm_mc, square_function_norm
from .resources.generators import process_stream, random_deterministic_process
from .resources.integrals import deterministic_operator
from .resources.report import make_report, with_seed_band
from .resources.statistics import MomentEstimate, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'square function form of gamma norms in L^q'
EQUALITY = ('q = 2: square function = weighted Frobenius to 1e-10 and '
            'ratio = 1 within {:g} sigma')
RECORDED = 'ratio band recorded'
FROBENIUS_TOLERANCE = 1e-10


def weighted_frobenius(X):
    weights = X.space.weights
    return float(np.sqrt(np.sum(weights[:, None] * X.matrix**2)))


def measure(cfg):
    at_two = cfg.space.q == 2.
    predicate = EQUALITY.format(cfg.ci_sigmas) if at_two else RECORDED
    rows = []
    for index in range(cfg.n_processes):
        process = random_deterministic_process(
            cfg.grid, cfg.hilbert, cfg.space, process_stream(cfg.seed, index))
        X = deterministic_operator(process)
        lhs = MomentEstimate.from_gamma_estimate(
            gamma_norm_mc(X, seed=utils.derived_seed(cfg.seed, index),
                          **utils.mc_options(cfg)), cfg.p)
        square_function = square_function_norm(X)
        rhs = MomentEstimate.exact(square_function, cfg.p)
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)
        if at_two:
            frobenius = weighted_frobenius(X)
            passed = (abs(square_function - frobenius) <=
                      FROBENIUS_TOLERANCE * max(1., frobenius) and
                      utils.ci_contains(ratio))
        else:
            passed = bool(np.isfinite(ratio[0]) and ratio[0] > 0)
        logger.info('square_function %d: ratio %r', index, ratio[0])
        rows.append(make_report(cfg, 'square_function', ANCHOR, lhs, rhs,
                                predicate, passed, ratio=ratio))
    return rows


def run(cfg):
    if cfg.space.is_hilbert:
        raise InputError('square_function needs an lq target, got '
                         '{}'.format(cfg.space.describe()))
    rows = measure(cfg)
    if cfg.space.q == 2.:
        return rows
    band = utils.recorded_band(cfg, rows, measure, RECORDED)
    logger.info('square_function: %s', band.describe())
    return with_seed_band(rows, band, RECORDED)
