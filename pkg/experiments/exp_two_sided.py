'''Two-sided moment estimate for adapted integrands.

(E||int Phi dW_H||^p)^{1/p} against (E||X_Phi||^p_gamma)^{1/p} per random
adapted Phi. Per-path gamma norms are exact for Hilbert targets and the
equivalent square function norm for L^q targets.
'''
from __future__ import division

import logging

import numpy as np

from . import utils
from .resources.generators import process_stream, random_adapted_process
from .resources.integrals import integral_process, truncation_gamma_norms
from .resources.report import make_report, with_seed_band
from .resources.spaces import banach_norms
from .resources.statistics import estimate_moment, ratio_interval

logger = logging.getLogger(__name__)

ANCHOR = 'two-sided L^p estimate for integrals of adapted processes'
EQUALITY = 'ratio = 1 within {:g} sigma (Hilbert E, p = 2)'
RECORDED = 'ratio finite and positive, recorded'


def random_processes(cfg):
    """The adapted integrands shared by the moment experiments."""
    return [random_adapted_process(cfg.grid, cfg.hilbert, cfg.space,
                                   process_stream(cfg.seed, index))
            for index in range(cfg.n_processes)]


def exact_case(cfg):
    return cfg.space.is_hilbert and cfg.p == 2.


def moment_sides(cfg, process, bundle):
    """Integral moment, gamma norm moment and the per-path samples."""
    integral = integral_process(process, bundle)
    final_norms = banach_norms(cfg.space, integral.final)
    gamma_norms = truncation_gamma_norms(process, bundle)[:, -1]
    return (estimate_moment(final_norms, cfg.p),
            estimate_moment(gamma_norms, cfg.p), integral, gamma_norms)


def check_ratio(cfg, ratio):
    if exact_case(cfg):
        return utils.ci_contains(ratio)
    return bool(np.isfinite(ratio[0]) and ratio[0] > 0)


def measure(cfg, processes=None, bundle=None):
    bundle = utils.sample_bundle(cfg) if bundle is None else bundle
    processes = random_processes(cfg) if processes is None else processes
    predicate = (EQUALITY.format(cfg.ci_sigmas) if exact_case(cfg)
                 else RECORDED)
    rows = []
    for index, process in enumerate(processes):
        lhs, rhs, _, _ = moment_sides(cfg, process, bundle)
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)
        logger.info('two_sided %d: ratio %r', index, ratio[0])
        rows.append(make_report(cfg, 'two_sided', ANCHOR, lhs, rhs,
                                predicate, check_ratio(cfg, ratio),
                                ratio=ratio))
    return rows


def run(cfg):
    rows = measure(cfg)
    if exact_case(cfg):
        return rows
    band = utils.recorded_band(cfg, rows, measure, RECORDED)
    logger.info('two_sided: %s', band.describe())
    return with_seed_band(rows, band, RECORDED)


def calibrate_constant(rows, p, reverse=False):
    """Largest observed (lhs / rhs)^p, or (rhs / lhs)^p with ``reverse``.

    The upper (lower) end of each ratio interval is used, so the constant
    errs on the large side.
    """
    if reverse:
        bounds = [1. / row.ci_low for row in rows if row.ci_low > 0]
        if len(bounds) < len(rows):
            return np.inf
    else:
        bounds = [row.ci_high for row in rows]
    return float(np.max(bounds))**p
