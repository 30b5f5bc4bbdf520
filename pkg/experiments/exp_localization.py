'''Stopped integrals and localizing times.

Per integrand: the integral stopped at a threshold stopping time equals the
Ito map of the truncated operator xi_X(tau) path by path; localizing times
tau_n increase with n; ||xi_X(t_i)|| is nondecreasing in i. As a proxy for
the finiteness equivalence, the moments of the stopped integral and of
||xi_X(tau_n)|| are compared on every integrand.
'''
from __future__ import division

import logging

import numpy as np

from . import utils
from .exp_two_sided import check_ratio, exact_case, random_processes
from .resources.gamma_ops import operator_integral
from .resources.integrals import (integral_process, localizing_times,
                                  stop_and_truncate, threshold_stopping_time,
                                  truncation_gamma_norms)
from .resources.report import make_report
from .resources.spaces import banach_norms
from .resources.statistics import estimate_moment, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'stopped integrals and localizing times'
PREDICATE = ('stopped identity to {:g} on {} paths; tau_n monotone in n; '
             '||xi_X(t)|| nondecreasing; stopped moments {}')
# the identity is checked through one GammaOperator per path
IDENTITY_PATHS = 200
LEVEL_QUANTILES = (0.25, 0.5, 0.75, 1.)


def identity_defect(process, bundle, stopping_time, n_paths):
    """Largest relative deviation of the Ito map of xi_X(tau) from the
    stopped integral over the first n_paths paths."""
    values, operators = stop_and_truncate(process, bundle, stopping_time)
    defect = 0.
    for m in range(n_paths):
        direct = operator_integral(operators[m], bundle.increments[m])
        scale = max(1., float(np.max(np.abs(values[m]))))
        defect = max(defect,
                     float(np.max(np.abs(direct - values[m]))) / scale)
    return defect


def localizing_monotone(process, bundle, levels):
    times = [localizing_times(process, bundle, level).indices
             for level in levels]
    return all(np.all(earlier <= later)
               for earlier, later in zip(times[:-1], times[1:]))


def run(cfg):
    bundle = utils.sample_bundle(cfg)
    n_paths = min(IDENTITY_PATHS, bundle.n_paths)
    moments = ('equal within {:g} sigma'.format(cfg.ci_sigmas)
               if exact_case(cfg) else 'finite together')
    predicate = PREDICATE.format(cfg.tolerance, n_paths, moments)
    rows = []
    for index, process in enumerate(random_processes(cfg)):
        integral = integral_process(process, bundle)
        threshold = threshold_stopping_time(
            integral.trajectories, cfg.space,
            float(np.median(integral.sup_norms)))
        defect = identity_defect(process, bundle, threshold, n_paths)

        clock = truncation_gamma_norms(process, bundle)
        nondecreasing = bool(np.all(np.diff(clock, axis=1) >= 0.))
        levels = np.quantile(clock[:, -1], LEVEL_QUANTILES)
        monotone = localizing_monotone(process, bundle, levels)

        tau = localizing_times(process, bundle, levels[1]).indices
        paths = np.arange(bundle.n_paths)
        lhs = estimate_moment(banach_norms(
            cfg.space, integral.trajectories[paths, tau]), cfg.p)
        rhs = estimate_moment(clock[paths, tau], cfg.p)
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)

        passed = (defect <= cfg.tolerance and monotone and nondecreasing and
                  check_ratio(cfg, ratio))
        logger.info('localization %d: defect %r, ratio %r', index, defect,
                    ratio[0])
        rows.append(make_report(cfg, 'localization', ANCHOR, lhs, rhs,
                                predicate, passed, ratio=ratio))
    return rows
