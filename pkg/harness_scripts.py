import importlib
import logging
import os
import time

import click
import yaml

from experiments.resources.config import load_config
from experiments.resources.errors import InputError
from experiments.resources.report import format_summary, write_report
from experiments.resources.statistics import warn_exponent

SCRIPT_FOLDER = os.path.dirname(os.path.abspath(__file__))
EXPERIMENT_CHAINS = os.path.join(SCRIPT_FOLDER, 'experiment_chains.yaml')
SUITE_CONFIG = os.path.join(SCRIPT_FOLDER, 'configs', 'suite.yaml')
LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)

EXIT_PASS = 0
EXIT_PREDICATE_FAILURE = 1
EXIT_ERROR = 2

logger = logging.getLogger('harness_scripts')


def _absolute(path):
    if not os.path.isabs(path):
        path = os.path.join(SCRIPT_FOLDER, path)
    return path


def load_catalog():
    with open(EXPERIMENT_CHAINS, 'r') as stream:
        return yaml.safe_load(stream)


def fetch_experiment(name):
    """Catalog entry of an experiment with its default config resolved.

    Raises
    ------
    InputError
        If no experiment with this name exists.
    """
    catalog = load_catalog()
    try:
        entry = dict(catalog[name])
    except KeyError:
        raise InputError('No experiment called {!r} found! Known: {}'.format(
            name, ', '.join(sorted(catalog))))
    entry['default_config'] = _absolute(entry['default_config'])
    return entry


def run_experiment(cfg, timings=False):
    """Run the experiment named in cfg and return its report rows."""
    entry = fetch_experiment(cfg.experiment)
    module = importlib.import_module('experiments.' + entry['module'])
    warn_exponent(cfg.p)
    logger.info('Running %s (%s)', cfg.experiment, entry['module'])
    start = time.perf_counter()
    rows = module.run(cfg)
    if timings:
        milliseconds = 1e3 * (time.perf_counter() - start)
        rows = [row.with_wallclock(milliseconds) for row in rows]
    return rows


def exit_status(rows):
    if all(row.passed for row in rows):
        return EXIT_PASS
    return EXIT_PREDICATE_FAILURE


def emit(rows, output, output_format, pretty):
    write_report(rows, output_format, output)
    click.echo('Outfile: {}'.format(output))
    if pretty:
        click.echo(format_summary(rows))
    n_failed = sum(not row.passed for row in rows)
    if n_failed:
        click.echo('{} of {} rows failed their predicate'.format(
            n_failed, len(rows)))


def fail(ctx, error):
    click.echo('Error: {}'.format(error), err=True)
    ctx.exit(EXIT_ERROR)


@click.group()
@click.option('--verbose', '-v', count=True,
              help='-v for progress, -vv for debug output')
def main(verbose):
    logging.basicConfig(
        level=LOG_LEVELS[min(verbose, len(LOG_LEVELS) - 1)],
        format='%(levelname)s %(name)s: %(message)s')


@main.command()
@click.argument('name')
@click.option('--config', 'config_file', default=None,
              type=click.Path(exists=True),
              help='YAML config, the catalog default if not given')
@click.option('--seed', default=None, type=int, help='Master seed')
@click.option('--paths', default=None, type=int, help='Number of paths M')
@click.option('--out', default=None, help='Report file')
@click.option('--format', 'output_format', default=None,
              type=click.Choice(['csv', 'json']), help='Report format')
@click.option('--workers', default=None, type=int,
              help='Worker processes; never changes results')
@click.option('--depth', default=None, type=int,
              help='Depth of the exhaustive sign trees')
@click.option('--pretty/--no-pretty', default=False,
              help='Print a summary table to stdout')
@click.option('--timings/--no-timings', default=False,
              help='Fill in wallclock_ms (reports are no longer '
                   'reproducible byte for byte)')
@click.pass_context
def run(ctx, name, config_file, seed, paths, out, output_format, workers,
        depth, pretty, timings):
    """Run one experiment of the catalog."""
    overrides = {'experiment': name, 'seed': seed, 'paths': paths,
                 'output': out, 'format': output_format, 'workers': workers,
                 'oracle_depth': depth}
    try:
        if config_file is None:
            config_file = fetch_experiment(name)['default_config']
        config_file = click.format_filename(config_file)
        click.echo('Run: {} ({})'.format(name, config_file))
        cfg = load_config(config_file, overrides)
        rows = run_experiment(cfg, timings)
        emit(rows, cfg.output, cfg.format, pretty)
    except Exception as error:
        logger.debug('run failed', exc_info=True)
        fail(ctx, error)
    ctx.exit(exit_status(rows))


@main.command('list')
def list_experiments():
    """Print the catalog names with their anchors."""
    catalog = load_catalog()
    width = max(len(name) for name in catalog)
    for name, entry in catalog.items():
        click.echo('{}  {}'.format(name.ljust(width), entry['anchor']))


def load_suite(path):
    """Config paths, report file and format of a suite document."""
    with open(path, 'r') as stream:
        suite = yaml.safe_load(stream) or {}
    configs = suite.get('experiments') or []
    if not configs:
        raise InputError('suite {!r} lists no experiments'.format(path))
    configs = [_absolute(config) for config in configs]
    return (configs, suite.get('output', 'suite_report.csv'),
            suite.get('format', 'csv'))


@main.command()
@click.option('--config', 'config_file', default=SUITE_CONFIG,
              type=click.Path(exists=True),
              help='Suite document listing the experiment configs')
@click.option('--seed', default=None, type=int, help='Master seed')
@click.option('--paths', default=None, type=int, help='Number of paths M')
@click.option('--out', default=None, help='Report file')
@click.option('--format', 'output_format', default=None,
              type=click.Choice(['csv', 'json']), help='Report format')
@click.option('--workers', default=None, type=int,
              help='Worker processes; never changes results')
@click.option('--pretty/--no-pretty', default=False,
              help='Print a summary table to stdout')
@click.option('--timings/--no-timings', default=False,
              help='Fill in wallclock_ms')
@click.pass_context
def suite(ctx, config_file, seed, paths, out, output_format, workers, pretty,
          timings):
    """Run the acceptance set and write all rows to one report."""
    overrides = {'seed': seed, 'paths': paths, 'workers': workers}
    rows = []
    try:
        configs, output, suite_format = load_suite(
            click.format_filename(config_file))
        output = out or output
        output_format = output_format or suite_format
        click.echo('Suite: {} experiments'.format(len(configs)))
        with click.progressbar(configs, label='Running suite') as bar:
            for path in bar:
                cfg = load_config(path, overrides)
                rows += run_experiment(cfg, timings)
        emit(rows, output, output_format, pretty)
    except Exception as error:
        logger.debug('suite failed', exc_info=True)
        fail(ctx, error)
    ctx.exit(exit_status(rows))


if __name__ == '__main__':
    main()
