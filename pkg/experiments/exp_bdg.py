'''Burkholder-Davis-Gundy: the running supremum of the integral process.

Two rows per integrand. The first compares (E sup_t ||int_0^t Phi dW||^p)
with the gamma norm moment; the second compares the supremum moment with
the endpoint moment, which it dominates path by path.
'''
from __future__ import division

import logging

import numpy as np

from . import utils
from .exp_two_sided import moment_sides, random_processes
from .resources.report import make_report, with_seed_band
from .resources.spaces import banach_norms
from .resources.statistics import estimate_moment, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'Burkholder-Davis-Gundy inequality with gamma norms'
BAND = 'two-sided band recorded; sup moment >= endpoint moment'
DOMINATION = 'E sup^p / E||final||^p >= 1, exact per path'


def measure(cfg):
    bundle = utils.sample_bundle(cfg)
    rows = []
    for index, process in enumerate(random_processes(cfg)):
        endpoint, gamma, integral, _ = moment_sides(cfg, process, bundle)
        sup = estimate_moment(integral.sup_norms, cfg.p)
        final_norms = banach_norms(cfg.space, integral.final)
        dominated = bool(np.all(integral.sup_norms >= final_norms) and
                         sup.value >= endpoint.value)

        ratio = ratio_interval(sup, gamma, cfg.ci_sigmas)
        logger.info('bdg %d: ratio %r', index, ratio[0])
        rows.append(make_report(
            cfg, 'bdg', ANCHOR, sup, gamma, BAND,
            dominated and np.isfinite(ratio[0]) and ratio[0] > 0,
            ratio=ratio))
        rows.append(make_report(cfg, 'bdg', ANCHOR, sup, endpoint,
                                DOMINATION, dominated))
    return rows


def run(cfg):
    rows = measure(cfg)
    band = utils.recorded_band(cfg, rows, measure, BAND)
    logger.info('bdg: %s', band.describe())
    return with_seed_band(rows, band, BAND)
