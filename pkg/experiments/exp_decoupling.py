'''Decoupled integrals: the same adapted Phi against W_H and against an
independent copy W~_H.
'''
from __future__ import division

import logging

from . import utils
from .exp_two_sided import check_ratio, exact_case, random_processes
from .resources.integrals import integrate, integrate_decoupled
from .resources.report import make_report, with_seed_band
from .resources.spaces import banach_norms
from .resources.statistics import estimate_moment, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'decoupling inequality in UMD spaces'
EQUALITY = 'ratio = 1 within {:g} sigma (Hilbert E, p = 2)'
RECORDED = 'two-sided band, ratio recorded'


def measure(cfg):
    bundle = utils.sample_bundle(cfg)
    predicate = (EQUALITY.format(cfg.ci_sigmas) if exact_case(cfg)
                 else RECORDED)
    rows = []
    for index, process in enumerate(random_processes(cfg)):
        lhs = estimate_moment(
            banach_norms(cfg.space, integrate(process, bundle)), cfg.p)
        rhs = estimate_moment(
            banach_norms(cfg.space, integrate_decoupled(process, bundle)),
            cfg.p)
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)
        logger.info('decoupling %d: ratio %r', index, ratio[0])
        rows.append(make_report(cfg, 'decoupling', ANCHOR, lhs, rhs,
                                predicate, check_ratio(cfg, ratio),
                                ratio=ratio))
    return rows


def run(cfg):
    rows = measure(cfg)
    if exact_case(cfg):
        return rows
    band = utils.recorded_band(cfg, rows, measure, RECORDED)
    logger.info('decoupling: %s', band.describe())
    return with_seed_band(rows, band, RECORDED)
