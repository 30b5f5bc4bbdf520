'''Report rows and their CSV / JSON serialization.'''
from __future__ import division

import csv
import json
import logging
from dataclasses import dataclass, replace

from .errors import InputError
from .statistics import RECOMMENDED_EXPONENTS, MomentEstimate, ratio_interval

logger = logging.getLogger(__name__)

COLUMNS = ('experiment', 'anchor', 'p', 'space_variant', 'd_E', 'q', 'd_H',
           'T', 'N_t', 'M', 'seed', 'mode', 'lhs', 'lhs_stderr', 'rhs',
           'rhs_stderr', 'ratio', 'ci_low', 'ci_high', 'predicate', 'pass',
           'generator_version', 'wallclock_ms')
FORMATS = ('csv', 'json')


@dataclass(frozen=True)
class RatioReport:
    """One report row: lhs against rhs under a declared predicate."""
    experiment: str
    anchor: str
    lhs: MomentEstimate
    rhs: MomentEstimate
    ratio: float
    ci_low: float
    ci_high: float
    predicate: str
    passed: bool
    p: float
    space_variant: str
    d_E: int
    q: float
    d_H: int
    T: float
    N_t: int
    M: int
    seed: int
    mode: str
    generator_version: str
    wallclock_ms: float = None

    def __post_init__(self):
        if not self.anchor:
            raise InputError('report rows need an anchor: {!r}'.format(
                self.experiment))

    def fields(self):
        """Row values keyed by column name."""
        return {
            'experiment': self.experiment,
            'anchor': self.anchor,
            'p': self.p,
            'space_variant': self.space_variant,
            'd_E': self.d_E,
            'q': self.q,
            'd_H': self.d_H,
            'T': self.T,
            'N_t': self.N_t,
            'M': self.M,
            'seed': self.seed,
            'mode': self.mode,
            'lhs': self.lhs.value,
            'lhs_stderr': self.lhs.standard_error,
            'rhs': self.rhs.value,
            'rhs_stderr': self.rhs.standard_error,
            'ratio': self.ratio,
            'ci_low': self.ci_low,
            'ci_high': self.ci_high,
            'predicate': self.predicate,
            'pass': bool(self.passed),
            'generator_version': self.generator_version,
            'wallclock_ms': self.wallclock_ms,
        }

    def with_wallclock(self, milliseconds):
        return replace(self, wallclock_ms=float(milliseconds))


def make_report(cfg, experiment, anchor, lhs, rhs, predicate, passed,
                ratio=None, **echo):
    """Assemble a row, echoing the configuration.

    ``ratio`` overrides the propagated ratio interval with a
    (ratio, ci_low, ci_high) triple; ``echo`` overrides config fields such as
    T or M for rows run under modified settings.
    """
    if ratio is None:
        ratio = ratio_interval(lhs, rhs, cfg.ci_sigmas)
    settings = dict(
        p=cfg.p, space_variant=cfg.space.variant, d_E=cfg.space.dim,
        q=cfg.space.q, d_H=cfg.d_H, T=cfg.grid.horizon, N_t=cfg.grid.n_bins,
        M=cfg.paths, seed=cfg.seed, mode=cfg.mode,
        generator_version=cfg.generator_version)
    settings.update(echo)
    if 'p' not in echo and float(cfg.p) not in RECOMMENDED_EXPONENTS:
        predicate += ' [warning: p outside {2, 4}]'
    return RatioReport(experiment, anchor, lhs, rhs, float(ratio[0]),
                       float(ratio[1]), float(ratio[2]), predicate,
                       bool(passed), **settings)


def format_value(value):
    """Canonical text of a report field."""
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return '{:.17g}'.format(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        # 17 significant digits round-trip to the same double
        return float('{:.17g}'.format(value))
    return value


def write_report(rows, output_format, path):
    """Write report rows as CSV or JSON.

    Raises
    ------
    InputError
        If there are no rows or the format is unknown.
    IOError
        If the path cannot be written.
    """
    rows = list(rows)
    if not rows:
        raise InputError('nothing to write: no report rows')
    if output_format not in FORMATS:
        raise InputError('Unknown report format: {!r}'.format(output_format))
    logger.info('Writing %d rows to %s', len(rows), path)
    with open(path, 'w', newline='') as open_file:
        if output_format == 'csv':
            writer = csv.writer(open_file, lineterminator='\n')
            writer.writerow(COLUMNS)
            for row in rows:
                fields = row.fields()
                writer.writerow([format_value(fields[c]) for c in COLUMNS])
        else:
            records = [{c: _json_value(row.fields()[c]) for c in COLUMNS}
                       for row in rows]
            json.dump(records, open_file, indent=2)
            open_file.write('\n')


def format_summary(rows):
    """Aligned human-readable table of the essential columns."""
    header = ('experiment', 'lhs', 'rhs', 'ratio', 'pass')
    lines = [[row.experiment, '{:.6g}'.format(row.lhs.value),
              '{:.6g}'.format(row.rhs.value), '{:.6g}'.format(row.ratio),
              'PASS' if row.passed else 'FAIL'] for row in rows]
    widths = [max(len(str(x)) for x in column)
              for column in zip(header, *lines)]
    text = []
    for line in [header] + lines:
        text.append('  '.join(str(x).ljust(w) for x, w in zip(line, widths)))
    return '\n'.join(text)


def with_seed_band(rows, band, predicate):
    """Rows declaring ``predicate`` also require a seed-stable band."""
    banded = []
    for row in rows:
        if row.predicate.startswith(predicate):
            row = replace(row, predicate='{}; {}'.format(row.predicate,
                                                         band.describe()),
                          passed=bool(row.passed and band.stable))
        banded.append(row)
    return banded
