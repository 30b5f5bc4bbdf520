'''Iterated integrals int_0^T (int_0^t Phi dW_H) dW(t).

The inner integral process is an E-valued martingale, used as integrand
against a scalar Brownian motion; its moment is bounded by sqrt(T) times
the endpoint moment of the inner integral.
'''
from __future__ import division

import logging

import numpy as np

from . import utils
from .exp_two_sided import exact_case, random_processes
from .resources.integrals import integral_process, iterated_integral
from .resources.report import make_report
from .resources.spaces import banach_norms
from .resources.statistics import estimate_moment, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'iterated stochastic integrals'
BOUNDED = 'lhs <= sqrt(T) rhs within {:g} sigma (Hilbert E, p = 2)'
RECORDED = 'ratio to sqrt(T) rhs finite, recorded'


def run(cfg):
    bundle = utils.sample_bundle(cfg)
    scale = np.sqrt(cfg.grid.horizon)
    predicate = (BOUNDED.format(cfg.ci_sigmas) if exact_case(cfg)
                 else RECORDED)
    rows = []
    for index, process in enumerate(random_processes(cfg)):
        lhs = estimate_moment(
            banach_norms(cfg.space, iterated_integral(process, bundle)),
            cfg.p)
        final = integral_process(process, bundle).final
        rhs = estimate_moment(banach_norms(cfg.space, final),
                              cfg.p).scaled(scale)
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)
        if exact_case(cfg):
            passed = ratio[1] <= 1.
        else:
            passed = bool(np.isfinite(ratio[0]))
        logger.info('iterated_integral %d: ratio %r', index, ratio[0])
        rows.append(make_report(cfg, 'iterated_integral', ANCHOR, lhs, rhs,
                                predicate, passed, ratio=ratio))
    return rows
