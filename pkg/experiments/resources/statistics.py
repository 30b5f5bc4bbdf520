'''Moment estimates with delta-method errors and ratio intervals.'''
from __future__ import division

import logging
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import InputError

logger = logging.getLogger(__name__)

RECOMMENDED_EXPONENTS = (2., 4.)
MAX_BAND_SPREAD = 0.25


@dataclass(frozen=True)
class MomentEstimate:
    """(E||eta||^p)^{1/p} with its standard error.

    ``samples`` is 0 for exactly computed values.
    """
    p: float
    value: float
    standard_error: float
    samples: int

    @classmethod
    def exact(cls, value, p=2.):
        return cls(float(p), float(value), 0., 0)

    @classmethod
    def from_gamma_estimate(cls, estimate, p=2.):
        return cls(float(p), float(estimate.value),
                   float(estimate.standard_error), int(estimate.samples))

    def scaled(self, factor):
        return MomentEstimate(self.p, factor * self.value,
                              abs(factor) * self.standard_error, self.samples)

    def power(self, exponent):
        """value**exponent with the error carried by the delta method."""
        value = self.value**exponent
        error = self.standard_error
        if self.value > 0:
            error *= abs(exponent) * self.value**(exponent - 1.)
        return MomentEstimate(self.p, value, error, self.samples)


def estimate_moment(samples, p):
    """((1/M) sum ||.||^p)^{1/p} from per-path norms.

    Parameters
    ----------
    samples : array_like
        Nonnegative norms, at least two.
    p : float
        Exponent in [1, inf).

    Returns
    -------
    MomentEstimate
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if len(samples) < 2:
        raise InputError('need at least 2 samples, got {}'.format(
            len(samples)))
    if not 1. <= p < np.inf:
        raise InputError('p must lie in [1, inf): {!r}'.format(p))
    powers = samples**p
    moment = float(np.mean(powers))
    moment_error = float(np.std(powers, ddof=1) / np.sqrt(len(samples)))
    value = moment**(1. / p)
    if moment > 0:
        standard_error = value * moment_error / (p * moment)
    else:
        standard_error = 0.
    return MomentEstimate(float(p), value, standard_error, len(samples))


def warn_exponent(p):
    """Log a warning for exponents outside the recommended set."""
    if float(p) not in RECOMMENDED_EXPONENTS:
        logger.warning('p=%r is outside %r; confidence intervals may be '
                       'unreliable', p, RECOMMENDED_EXPONENTS)
        return True
    return False


def ratio_interval(lhs, rhs, sigmas=4.):
    """lhs / rhs and a +-sigmas interval from propagated errors.

    Returns
    -------
    ratio, ci_low, ci_high : float
        NaN when rhs.value is 0.
    """
    if rhs.value <= 0:
        return float('nan'), float('nan'), float('nan')
    ratio = lhs.value / rhs.value
    relative = 0.
    if lhs.value > 0:
        relative += (lhs.standard_error / lhs.value)**2
    relative += (rhs.standard_error / rhs.value)**2
    error = abs(ratio) * np.sqrt(relative)
    if lhs.value == 0:
        error = lhs.standard_error / rhs.value
    return ratio, ratio - sigmas * error, ratio + sigmas * error


def binomial_interval(successes, trials, sigmas=4.):
    """Wilson score interval for a binomial proportion.

    The confidence level matches +-sigmas of a normal distribution.
    """
    if trials < 1 or not 0 <= successes <= trials:
        raise InputError('invalid binomial counts: {!r} of {!r}'.format(
            successes, trials))
    level = 2. * stats.norm.cdf(sigmas) - 1.
    result = stats.binomtest(int(successes), int(trials))
    interval = result.proportion_ci(confidence_level=level, method='wilson')
    return float(interval.low), float(interval.high)


@dataclass(frozen=True)
class SeedBand:
    """Band [min, max] of an entry's ratios, once per independent seed."""
    seeds: tuple
    lows: tuple
    highs: tuple

    @property
    def low(self):
        return float(np.min(self.lows))

    @property
    def high(self):
        return float(np.max(self.highs))

    @property
    def spread(self):
        """Largest (max - min) / mean of either band edge over the seeds."""
        spreads = [relative_spread(edges) for edges in (self.lows,
                                                        self.highs)]
        return float(np.max(spreads))

    @property
    def stable(self):
        return self.spread < MAX_BAND_SPREAD

    def describe(self):
        return ('band spread < {:g} over {} seeds: [{:.6g}, {:.6g}], '
                'spread {:.3g}').format(MAX_BAND_SPREAD, len(self.seeds),
                                        self.low, self.high, self.spread)


def relative_spread(values):
    """(max - min) / mean; inf unless all values are finite and positive."""
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        return np.inf
    return float((np.max(values) - np.min(values)) / np.mean(values))


def seed_band(ratio_sets, seeds):
    """SeedBand from the ratios obtained under each seed.

    Parameters
    ----------
    ratio_sets : sequence of array_like
        ratio_sets[s] holds the ratios of every row of the entry, computed
        with seeds[s].
    seeds : sequence of int

    Returns
    -------
    SeedBand
        Edges are NaN for seeds without any finite ratio.
    """
    if len(ratio_sets) != len(seeds) or len(seeds) < 2:
        raise InputError('need one ratio set per seed and at least two '
                         'seeds, got {} and {}'.format(len(ratio_sets),
                                                       len(seeds)))
    lows, highs = [], []
    for ratios in ratio_sets:
        ratios = np.asarray(ratios, dtype=float)
        ratios = ratios[np.isfinite(ratios)]
        lows.append(float(np.min(ratios)) if len(ratios) else np.nan)
        highs.append(float(np.max(ratios)) if len(ratios) else np.nan)
    band = SeedBand(tuple(int(s) for s in seeds), tuple(lows), tuple(highs))
    logger.debug('seed band %r, spread %r', (band.low, band.high),
                 band.spread)
    return band
