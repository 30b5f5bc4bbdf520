'''The process n^{1/2} 2^{n/2} xi_n x_n on dyadic intervals.

Its divergence statistic sum_k n_k a_k^2 grows without bound as levels are
added. Rows compare the median statistic between consecutive level
settings; a last row checks the success frequencies of the indicators.
'''
from __future__ import division

import logging

import numpy as np

from . import utils
from .resources.report import make_report
from .resources.statistics import MomentEstimate
from .resources.worked_examples import example29_process

logger = logging.getLogger(__name__)

ANCHOR = 'process with square integrable pairings but not paths'
LEVELS = (8, 12, 16)
GROWTH = ('median statistic at {} levels > median at {} levels; direct '
          'integration = closed form to {:g}')
FREQUENCIES = 'max_n |P{{xi_n = 1}} - 1/n| / sigma_n <= {:g} for n <= {}'


def frequency_scores(sample):
    """|frequency - 1/n| in units of the binomial standard error."""
    frequency, _ = sample.success_frequencies()
    levels = np.arange(1, sample.n_max + 1, dtype=float)
    expected = 1. / levels
    error = np.sqrt(expected * (1. - expected) / len(sample.xi))
    deviation = np.abs(frequency - expected)
    scores = np.zeros_like(deviation)
    nonzero = error > 0
    scores[nonzero] = deviation[nonzero] / error[nonzero]
    scores[~nonzero & (deviation > 0)] = np.inf
    return scores


def closed_form_defect(sample):
    scale = np.maximum(1., np.abs(sample.statistic))
    return float(np.max(np.abs(sample.integrated - sample.statistic) /
                        scale))


def run(cfg):
    bundle = utils.sample_bundle(cfg)
    samples = [example29_process(n_max, bundle, workers=cfg.workers)
               for n_max in LEVELS]
    medians = [MomentEstimate(1., float(np.median(sample.statistic)), 0.,
                              bundle.n_paths)
               for sample in samples]
    rows = []
    for k in range(1, len(LEVELS)):
        defect = max(closed_form_defect(samples[k]),
                     closed_form_defect(samples[k - 1]))
        passed = (medians[k].value > medians[k - 1].value and
                  defect <= cfg.tolerance)
        logger.info('example29: median %r at %d levels', medians[k].value,
                    LEVELS[k])
        rows.append(make_report(
            cfg, 'example29', ANCHOR, medians[k], medians[k - 1],
            GROWTH.format(LEVELS[k], LEVELS[k - 1], cfg.tolerance), passed,
            p=1.))

    largest = samples[-1]
    score = float(np.max(frequency_scores(largest)))
    rows.append(make_report(
        cfg, 'example29', ANCHOR,
        MomentEstimate(1., score, 0., bundle.n_paths),
        MomentEstimate.exact(cfg.ci_sigmas, 1.),
        FREQUENCIES.format(cfg.ci_sigmas, largest.n_max),
        score <= cfg.ci_sigmas, p=1.))
    return rows
