'''Tail estimates linking the integral process and the gamma norm.

Forward: P(sup_t ||int_0^t Phi dW_H|| > eps) <= C delta^p / eps^p
+ P(||X_Phi||_gamma >= delta). Reverse: P(||X_Phi||_gamma > eps) <=
C' m(delta) / eps^p + P(sup_t ||int_0^t Phi dW_H|| >= delta), where
m(delta) is the p-th moment of the integral stopped when its norm first
reaches delta; it replaces delta^p because discrete paths overshoot the
level. Both are checked on a 5 x 5 lattice of (delta, eps) with Wilson
intervals for the probabilities; C and C' are calibrated from the
two_sided rows of the same configuration.
'''
from __future__ import division

import logging

import numpy as np

from . import exp_two_sided, utils
from .resources.errors import InputError
from .resources.integrals import (integral_process, threshold_stopping_time,
                                  truncation_gamma_norms)
from .resources.report import make_report
from .resources.spaces import banach_norms
from .resources.statistics import MomentEstimate, binomial_interval

logger = logging.getLogger(__name__)

ANCHOR = 'tail estimates for stochastic integrals'
FORWARD = ('P(sup > eps) <= C delta^p / eps^p + P(||X||_gamma >= delta), '
           'C = {:.6g}, delta = {:.6g}, eps = {:.6g}')
REVERSE = ('P(||X||_gamma > eps) <= C\' m(delta) / eps^p + P(sup >= delta), '
           'C\' = {:.6g}, delta = {:.6g}, eps = {:.6g}')
DELTA_QUANTILES = (0.1, 0.3, 0.5, 0.7, 0.9)
EPS_QUANTILES = (0.5, 0.7, 0.8, 0.9, 0.95)


def probability(events, sigmas):
    """Empirical frequency with its standard error and Wilson interval."""
    events = np.asarray(events, dtype=bool)
    successes, trials = int(np.count_nonzero(events)), len(events)
    frequency = successes / trials
    error = np.sqrt(frequency * (1. - frequency) / trials)
    low, high = binomial_interval(successes, trials, sigmas)
    return MomentEstimate(1., frequency, error, trials), low, high


def lattice_rows(cfg, constant, moments, lhs_norms, rhs_norms, deltas,
                 epsilons, template):
    """Rows for P(lhs_norms > eps) <= constant m / eps^p + P(rhs >= delta).
    """
    rows = []
    for delta, moment in zip(deltas, moments):
        tail, _, tail_high = probability(rhs_norms >= delta, cfg.ci_sigmas)
        for eps in epsilons:
            event, low, high = probability(lhs_norms > eps, cfg.ci_sigmas)
            markov = constant * moment / eps**cfg.p
            bound = MomentEstimate(1., markov + tail.value,
                                   tail.standard_error, tail.samples)
            ratio = (event.value / bound.value, low / bound.value,
                     high / bound.value)
            passed = bool(low <= markov + tail_high)
            rows.append(make_report(cfg, 'tail_bound', ANCHOR, event, bound,
                                    template.format(constant, delta, eps),
                                    passed, ratio=ratio))
    return rows


def run(cfg):
    if cfg.p <= 1.:
        raise InputError('tail_bound needs p > 1, got {!r}'.format(cfg.p))
    bundle = utils.sample_bundle(cfg)
    processes = exp_two_sided.random_processes(cfg)
    calibration = exp_two_sided.measure(cfg, processes, bundle)
    doob = cfg.p / (cfg.p - 1.)
    forward_constant = doob**cfg.p * exp_two_sided.calibrate_constant(
        calibration, cfg.p)
    reverse_constant = exp_two_sided.calibrate_constant(calibration, cfg.p,
                                                        reverse=True)
    logger.info('tail_bound: C = %r, C\' = %r', forward_constant,
                reverse_constant)

    process = processes[0]
    integral = integral_process(process, bundle)
    sup_norms = integral.sup_norms
    gamma_norms = truncation_gamma_norms(process, bundle)[:, -1]

    deltas = np.quantile(gamma_norms, DELTA_QUANTILES)
    epsilons = np.quantile(sup_norms, EPS_QUANTILES)
    rows = lattice_rows(cfg, forward_constant, deltas**cfg.p, sup_norms,
                        gamma_norms, deltas, epsilons, FORWARD)

    deltas = np.quantile(sup_norms, DELTA_QUANTILES)
    epsilons = np.quantile(gamma_norms, EPS_QUANTILES)
    moments = []
    for delta in deltas:
        stopping_time = threshold_stopping_time(integral.trajectories,
                                                cfg.space, delta)
        stopped = integral.trajectories[np.arange(bundle.n_paths),
                                        stopping_time.indices]
        moments.append(np.mean(banach_norms(cfg.space, stopped)**cfg.p))
    rows += lattice_rows(cfg, reverse_constant, moments, gamma_norms,
                         sup_norms, deltas, epsilons, REVERSE)
    return rows
