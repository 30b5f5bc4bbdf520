import csv
import importlib
import json

import pytest
from click.testing import CliRunner

import harness_scripts
from experiments.resources.config import parse_config
from experiments.resources.errors import InputError
from experiments.resources.report import COLUMNS, make_report
from experiments.resources.statistics import MomentEstimate


def invoke(*args):
    return CliRunner().invoke(harness_scripts.main, [str(a) for a in args])


def test_catalog_entries_resolve():
    catalog = harness_scripts.load_catalog()
    for name in catalog:
        entry = harness_scripts.fetch_experiment(name)
        module = importlib.import_module('experiments.' + entry['module'])
        assert callable(module.run)
        assert entry['predicate']
        if hasattr(module, 'ANCHOR'):
            assert entry['anchor'] == module.ANCHOR


def test_unknown_experiment():
    with pytest.raises(InputError):
        harness_scripts.fetch_experiment('ito_isometri')


def test_list():
    result = invoke('list')
    assert result.exit_code == 0
    names = [line.split()[0] for line in result.output.splitlines()]
    assert names == list(harness_scripts.load_catalog())


def test_run_writes_report(tmpdir):
    out = tmpdir.join('umd.csv')
    result = invoke('run', 'umd_oracle', '--depth', 3, '--out', out,
                    '--pretty')
    assert result.exit_code == harness_scripts.EXIT_PASS, result.output
    assert 'Outfile: {}'.format(out) in result.output
    assert 'PASS' in result.output
    with open(str(out)) as stream:
        records = list(csv.reader(stream))
    assert tuple(records[0]) == COLUMNS


def test_run_json_with_timings(tmpdir):
    out = tmpdir.join('umd.json')
    result = invoke('run', 'umd_oracle', '--depth', 3, '--out', out,
                    '--format', 'json', '--timings')
    assert result.exit_code == harness_scripts.EXIT_PASS, result.output
    with open(str(out)) as stream:
        records = json.load(stream)
    assert all(record['wallclock_ms'] >= 0. for record in records)


def test_run_unknown_experiment():
    result = invoke('run', 'nothing')
    assert result.exit_code == harness_scripts.EXIT_ERROR
    assert 'No experiment called' in result.output


def test_run_invalid_config(tmpdir):
    config = tmpdir.join('bad.yaml')
    config.write('experiment: ito_isometry\npaths: 1\n')
    result = invoke('run', 'ito_isometry', '--config', config, '--out',
                    tmpdir.join('bad.csv'))
    assert result.exit_code == harness_scripts.EXIT_ERROR
    assert 'paths' in result.output


def test_run_budget_violation(tmpdir):
    result = invoke('run', 'umd_oracle', '--depth', 20, '--out',
                    tmpdir.join('deep.csv'))
    assert result.exit_code == harness_scripts.EXIT_ERROR
    assert 'oracle_depth' in result.output


def test_failed_predicate_exit_code(tmpdir, monkeypatch):
    cfg = parse_config('experiment: ito_isometry')
    row = make_report(cfg, 'ito_isometry', 'anchor',
                      MomentEstimate.exact(2.), MomentEstimate.exact(1.),
                      'ratio = 1', False)
    monkeypatch.setattr(harness_scripts, 'run_experiment',
                        lambda cfg, timings=False: [row])
    result = invoke('run', 'ito_isometry', '--out', tmpdir.join('f.csv'))
    assert result.exit_code == harness_scripts.EXIT_PREDICATE_FAILURE
    assert '1 of 1 rows failed' in result.output


def test_exit_status():
    passed = type('Row', (), {'passed': True})()
    failed = type('Row', (), {'passed': False})()
    assert harness_scripts.exit_status([passed]) == 0
    assert harness_scripts.exit_status([passed, failed]) == 1


def test_suite(tmpdir):
    suite = tmpdir.join('suite.yaml')
    suite.write('output: {}\nexperiments:\n  - configs/umd_oracle.yaml\n'
                '  - configs/gamma_fubini.yaml\n'.format(
                    tmpdir.join('suite.csv')))
    result = invoke('suite', '--config', suite)
    assert result.exit_code == harness_scripts.EXIT_PASS, result.output
    with open(str(tmpdir.join('suite.csv'))) as stream:
        records = list(csv.DictReader(stream))
    assert {r['experiment'] for r in records} == {'umd_oracle',
                                                   'gamma_fubini'}


def test_empty_suite(tmpdir):
    suite = tmpdir.join('suite.yaml')
    suite.write('output: suite.csv\n')
    with pytest.raises(InputError):
        harness_scripts.load_suite(str(suite))
    assert invoke('suite', '--config', suite).exit_code == \
        harness_scripts.EXIT_ERROR


@pytest.mark.parametrize('command', ['run', 'suite'])
def test_worker_count_does_not_change_reports(tmpdir, command):
    # 2048 paths in blocks of 128: more blocks than workers
    config = tmpdir.join('lq.yaml')
    config.write('experiment: two_sided\nspace:\n  variant: lq\n  d_E: 4\n'
                 '  q: 4.0\npaths: 2048\nblock_size: 128\nn_processes: 2\n')
    if command == 'run':
        args = ['run', 'two_sided', '--config', config]
    else:
        suite = tmpdir.join('suite.yaml')
        suite.write('experiments:\n  - {}\n  - configs/gamma_fubini.yaml\n'
                    .format(config))
        args = ['suite', '--config', suite, '--seed', 7]
    reports = []
    for workers in (1, 8):
        out = tmpdir.join('{}_{}.csv'.format(command, workers))
        result = invoke(*(args + ['--workers', workers, '--out', out]))
        assert result.exit_code != harness_scripts.EXIT_ERROR, result.output
        reports.append(out.read_binary())
    assert reports[0] == reports[1]
