'''gamma-Fubini: L^p(S; gamma(H, E)) against gamma(H, L^p(S; E)) on random
finite probability spaces S.
'''
from __future__ import division

import logging

import numpy as np

from . import utils
from .resources.gamma_ops import gamma_fubini_compare
from .resources.generators import process_stream, random_operator
from .resources.report import make_report, with_seed_band
from .resources.statistics import MomentEstimate, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'gamma-Fubini isomorphism'
EXACT = 'p = 2, Hilbert E: lhs = rhs to 1e-10, both exact'
EQUALITY = 'p = 2: ratio = 1 within {:g} sigma'
RECORDED = 'ratio band recorded'
EXACT_TOLERANCE = 1e-10
MAX_POINTS = 5


def random_sample_set(cfg, index):
    rng = process_stream(cfg.seed, index)
    n_points = int(rng.integers(1, MAX_POINTS + 1))
    operators = [random_operator(cfg.grid, cfg.hilbert, cfg.space, rng)
                 for _ in range(n_points)]
    weights = rng.random(n_points) + 0.1
    return operators, weights / np.sum(weights)


def measure(cfg):
    options = utils.mc_options(cfg)
    options.pop('workers')
    rows = []
    for index in range(cfg.n_processes):
        operators, weights = random_sample_set(cfg, index)
        lhs, rhs = gamma_fubini_compare(
            operators, weights, cfg.p,
            seed=utils.derived_seed(cfg.seed, index), **options)
        lhs = MomentEstimate.from_gamma_estimate(lhs, cfg.p)
        rhs = MomentEstimate.from_gamma_estimate(rhs, cfg.p)
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)
        if cfg.p == 2. and cfg.space.is_hilbert:
            predicate = EXACT
            passed = abs(lhs.value - rhs.value) <= EXACT_TOLERANCE * max(
                1., rhs.value)
        elif cfg.p == 2.:
            predicate = EQUALITY.format(cfg.ci_sigmas)
            passed = utils.ci_contains(ratio)
        else:
            predicate = RECORDED
            passed = bool(np.isfinite(ratio[0]) and ratio[0] > 0)
        logger.info('gamma_fubini %d: %d points, ratio %r', index,
                    len(operators), ratio[0])
        rows.append(make_report(cfg, 'gamma_fubini', ANCHOR, lhs, rhs,
                                predicate, passed, ratio=ratio))
    return rows


def run(cfg):
    rows = measure(cfg)
    if cfg.p == 2.:
        return rows
    band = utils.recorded_band(cfg, rows, measure, RECORDED)
    logger.info('gamma_fubini: %s', band.describe())
    return with_seed_band(rows, band, RECORDED)
