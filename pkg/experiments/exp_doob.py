'''Doob's maximal inequality for the integral process.'''
from __future__ import division

import logging

from . import utils
from .exp_two_sided import random_processes
from .resources.errors import InputError
from .resources.integrals import integral_process
from .resources.report import make_report
from .resources.spaces import banach_norms
from .resources.statistics import estimate_moment, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'Doob maximal inequality'
PREDICATE = ('(E sup^p)^{{1/p}} <= q (E||final||^p)^{{1/p}}, q = {:g}, '
             'within {:g} sigma')


def run(cfg):
    if cfg.p <= 1.:
        raise InputError('doob needs p > 1, got {!r}'.format(cfg.p))
    q = cfg.p / (cfg.p - 1.)
    bundle = utils.sample_bundle(cfg)
    predicate = PREDICATE.format(q, cfg.ci_sigmas)
    rows = []
    for index, process in enumerate(random_processes(cfg)):
        integral = integral_process(process, bundle)
        lhs = estimate_moment(integral.sup_norms, cfg.p)
        rhs = estimate_moment(banach_norms(cfg.space, integral.final),
                              cfg.p).scaled(q)
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)
        logger.info('doob %d: ratio %r', index, ratio[0])
        rows.append(make_report(cfg, 'doob', ANCHOR, lhs, rhs, predicate,
                                ratio[1] <= 1., ratio=ratio))
    return rows
