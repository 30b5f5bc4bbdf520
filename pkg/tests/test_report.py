import csv
import json

import numpy as np
import pytest

from experiments.resources.config import parse_config
from experiments.resources.errors import InputError
from experiments.resources.report import (COLUMNS, format_summary,
                                          format_value, make_report,
                                          with_seed_band, write_report)
from experiments.resources.statistics import MomentEstimate, seed_band

LHS = MomentEstimate(2., 1.25, 0.01, 1000)
RHS = MomentEstimate(2., 1.2, 0.02, 1000)


@pytest.fixture
def cfg():
    return parse_config('experiment: ito_isometry\nseed: 11\n')


def rows(cfg):
    return [make_report(cfg, 'ito_isometry', 'Ito isometry', LHS, RHS,
                        'ratio = 1', True),
            make_report(cfg, 'ito_isometry', 'Ito isometry', RHS, LHS,
                        'ratio = 1', False, ratio=(0.5, 0.4, 0.6), M=7)]


def test_rows_echo_the_config(cfg):
    row = rows(cfg)[0]
    fields = row.fields()
    assert set(fields) == set(COLUMNS)
    assert fields['seed'] == 11
    assert fields['space_variant'] == 'hilbert'
    assert fields['N_t'] == cfg.grid.n_bins
    assert fields['generator_version'] == cfg.generator_version
    assert fields['wallclock_ms'] is None
    assert row.ratio == pytest.approx(1.25 / 1.2)


def test_echo_overrides_and_explicit_ratio(cfg):
    row = rows(cfg)[1]
    assert row.M == 7
    assert (row.ratio, row.ci_low, row.ci_high) == (0.5, 0.4, 0.6)
    assert not row.passed


def test_unusual_exponent_is_flagged(cfg):
    row = make_report(cfg.replace(p=3.), 'two_sided', 'anchor', LHS, RHS,
                      'recorded', True)
    assert 'warning' in row.predicate
    row = make_report(cfg.replace(p=3.), 'two_sided', 'anchor', LHS, RHS,
                      'recorded', True, p=2.)
    assert 'warning' not in row.predicate


def test_rows_need_an_anchor(cfg):
    with pytest.raises(InputError):
        make_report(cfg, 'ito_isometry', '', LHS, RHS, 'ratio = 1', True)


def test_wallclock(cfg):
    row = rows(cfg)[0].with_wallclock(12)
    assert row.wallclock_ms == 12.


@pytest.mark.parametrize('value, text', [
    (None, ''), (True, 'true'), (False, 'false'), (0.1, '0.10000000000000001'),
    (3, '3'), ('hilbert', 'hilbert')])
def test_format_value(value, text):
    assert format_value(value) == text


def test_write_csv(tmpdir, cfg):
    path = str(tmpdir.join('report.csv'))
    write_report(rows(cfg), 'csv', path)
    with open(path) as stream:
        records = list(csv.reader(stream))
    assert tuple(records[0]) == COLUMNS
    assert len(records) == 3
    record = dict(zip(COLUMNS, records[1]))
    assert record['pass'] == 'true'
    assert float(record['lhs']) == 1.25
    assert record['wallclock_ms'] == ''


def test_write_json(tmpdir, cfg):
    path = str(tmpdir.join('report.json'))
    write_report(rows(cfg), 'json', path)
    with open(path) as stream:
        records = json.load(stream)
    assert [list(record) for record in records] == [list(COLUMNS)] * 2
    assert records[1]['pass'] is False
    assert records[0]['rhs_stderr'] == 0.02


def test_reports_are_reproducible(tmpdir, cfg):
    first, again = tmpdir.join('a.csv'), tmpdir.join('b.csv')
    write_report(rows(cfg), 'csv', str(first))
    write_report(rows(cfg), 'csv', str(again))
    assert first.read_binary() == again.read_binary()


def test_write_rejects_invalid_input(tmpdir, cfg):
    with pytest.raises(InputError):
        write_report([], 'csv', str(tmpdir.join('empty.csv')))
    with pytest.raises(InputError):
        write_report(rows(cfg), 'xml', str(tmpdir.join('report.xml')))


def test_nan_ratio_is_written(tmpdir, cfg):
    row = make_report(cfg, 'ito_isometry', 'anchor', LHS,
                      MomentEstimate.exact(0.), 'ratio = 1', False)
    assert np.isnan(row.ratio)
    path = str(tmpdir.join('nan.csv'))
    write_report([row], 'csv', path)
    with open(path) as stream:
        record = dict(zip(COLUMNS, list(csv.reader(stream))[1]))
    assert record['ratio'] == 'nan'


def test_summary(cfg):
    summary = format_summary(rows(cfg)).splitlines()
    assert summary[0].split() == ['experiment', 'lhs', 'rhs', 'ratio', 'pass']
    assert summary[1].split()[-1] == 'PASS'
    assert summary[2].split()[-1] == 'FAIL'


@pytest.mark.parametrize('ratio_sets, passed', [
    ([[1.0, 1.1], [1.02, 1.12]], True),
    ([[1.0, 1.1], [0.5, 1.1]], False),
])
def test_seed_band_gates_recorded_rows(cfg, ratio_sets, passed):
    recorded = make_report(cfg, 'two_sided', 'anchor', LHS, RHS,
                           'band recorded', True)
    other = make_report(cfg, 'two_sided', 'anchor', LHS, RHS, 'ratio = 1',
                        True)
    band = seed_band(ratio_sets, [1, 2])
    banded, untouched = with_seed_band([recorded, other], band,
                                       'band recorded')
    assert banded.passed is passed
    assert banded.predicate.startswith('band recorded; band spread < 0.25')
    assert untouched == other
