'''Harness configuration: YAML documents merged over the defaults.

Defaults live in configs/default_harness.yaml. A custom document only lists
what it changes; nested sections (``space``, ``grid``) are merged key by
key. Command line flags are applied last.
'''
from __future__ import division

import copy
import logging
import os
from dataclasses import asdict, dataclass, replace

import numpy as np
import yaml

from .. import utils
from .errors import ConfigError, InputError
from .generators import GENERATOR_TAG
from .paths import MODES
from .report import FORMATS
from .sign_tree import MAX_PATTERN_DEPTH, MAX_TREE_BITS
from .spaces import VARIANTS, BanachSpaceSpec, HilbertSpec, TimeGrid

logger = logging.getLogger(__name__)

SCRIPT_FOLDER = os.path.dirname(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))))
DEFAULT_CONFIG = os.path.join(SCRIPT_FOLDER, 'configs',
                              'default_harness.yaml')
SECTIONS = ('space', 'grid')


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated settings of one experiment run."""
    experiment: str
    space: BanachSpaceSpec
    d_H: int
    grid: TimeGrid
    paths: int
    p: float
    seed: int
    mode: str
    oracle_depth: int
    n_processes: int
    mc_samples: int
    block_size: int
    gaussian_method: str
    ci_sigmas: float
    tolerance: float
    output: str
    format: str
    workers: int

    @property
    def hilbert(self):
        return HilbertSpec(self.d_H)

    @property
    def generator_version(self):
        return utils.generator_version(self.gaussian_method, self.block_size,
                                       GENERATOR_TAG)

    @property
    def sampling_options(self):
        """Keyword arguments shared by all sampling routines."""
        return dict(gaussian_method=self.gaussian_method,
                    block_size=self.block_size, workers=self.workers)

    def replace(self, **changes):
        return replace(self, **changes)

    def echo(self):
        """Plain dict of the settings, nested like the YAML document."""
        values = asdict(self)
        values['space'] = {'variant': self.space.variant,
                           'd_E': self.space.dim, 'q': self.space.q,
                           'weights': self.space.weights.tolist()}
        values['grid'] = {'T': self.grid.horizon, 'N_t': self.grid.n_bins}
        return values


def load_defaults(path=DEFAULT_CONFIG):
    with open(path, 'r') as stream:
        return yaml.safe_load(stream)


def merge_settings(defaults, custom_settings):
    """defaults updated with custom_settings; unknown keys are rejected."""
    config = copy.deepcopy(defaults)
    for key, value in custom_settings.items():
        if key not in config:
            raise ConfigError(key, 'unknown key')
        if key in SECTIONS:
            if value is None:
                continue
            if not isinstance(value, dict):
                raise ConfigError(key, 'expected a mapping, got {!r}'.format(
                    value))
            for sub_key, sub_value in value.items():
                if sub_key not in config[key]:
                    raise ConfigError('{}.{}'.format(key, sub_key),
                                      'unknown key')
                config[key][sub_key] = sub_value
        else:
            config[key] = value
    return config


def apply_overrides(config, overrides):
    """Apply flag values (None means not given); dotted keys reach sections.
    """
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if '.' in key:
            section, sub_key = key.split('.', 1)
            if section not in SECTIONS or sub_key not in config[section]:
                raise ConfigError(key, 'unknown key')
            config[section][sub_key] = value
        else:
            if key not in config:
                raise ConfigError(key, 'unknown key')
            config[key] = value
    return config


def _integer(config, key, minimum=None, maximum=None, section=None):
    value = config[section][key] if section else config[key]
    path = '{}.{}'.format(section, key) if section else key
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigError(path, 'must be an integer, got {!r}'.format(value))
    if minimum is not None and value < minimum:
        raise ConfigError(path, 'must be >= {}, got {!r}'.format(
            minimum, value))
    if maximum is not None and value > maximum:
        raise ConfigError(path, 'must be <= {}, got {!r}'.format(
            maximum, value))
    return int(value)


def _real(config, key, section=None):
    value = config[section][key] if section else config[key]
    path = '{}.{}'.format(section, key) if section else key
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, 'must be a number, got {!r}'.format(value))
    if not np.isfinite(value):
        raise ConfigError(path, 'must be finite, got {!r}'.format(value))
    return float(value)


def _choice(config, key, choices):
    value = config[key]
    if value not in choices:
        raise ConfigError(key, 'must be one of {}, got {!r}'.format(
            ', '.join(choices), value))
    return value


def validate(config):
    """Build an ExperimentConfig from a merged settings dict.

    Raises
    ------
    ConfigError
        Naming the key path of the first offending value.
    """
    experiment = config['experiment']
    if experiment is not None and not isinstance(experiment, str):
        raise ConfigError('experiment', 'must be a name, got {!r}'.format(
            experiment))

    space = config['space']
    variant = space['variant']
    if variant not in VARIANTS:
        raise ConfigError('space.variant', 'must be one of {}, got '
                          '{!r}'.format(', '.join(VARIANTS), variant))
    d_E = _integer(config, 'd_E', minimum=1, section='space')
    q = _real(config, 'q', section='space')
    if not 1. < q < np.inf:
        raise ConfigError('space.q', 'q must lie in (1, ∞), got '
                          '{!r}'.format(q))
    weights = space['weights']
    if weights is not None:
        if (not isinstance(weights, list) or len(weights) != d_E or
                not all(isinstance(w, (int, float)) and w > 0
                        for w in weights)):
            raise ConfigError('space.weights', 'expected {} positive '
                              'numbers, got {!r}'.format(d_E, weights))
    space_spec = BanachSpaceSpec(variant, d_E, q, weights)

    d_H = _integer(config, 'd_H', minimum=1)
    horizon = _real(config, 'T', section='grid')
    if horizon <= 0:
        raise ConfigError('grid.T', 'must be positive, got {!r}'.format(
            horizon))
    n_bins = _integer(config, 'N_t', minimum=1, section='grid')
    try:
        grid = TimeGrid(horizon, n_bins)
    except InputError as error:
        raise ConfigError('grid', str(error))

    p = _real(config, 'p')
    if p < 1:
        raise ConfigError('p', 'must lie in [1, inf), got {!r}'.format(p))
    oracle_depth = _integer(config, 'oracle_depth', minimum=1,
                            maximum=MAX_PATTERN_DEPTH)
    if experiment == 'umd_oracle' and 2 * oracle_depth > MAX_TREE_BITS:
        raise ConfigError('oracle_depth', 'decoupling tree needs {} sign '
                          'bits, budget is {}'.format(2 * oracle_depth,
                                                      MAX_TREE_BITS))
    ci_sigmas = _real(config, 'ci_sigmas')
    if ci_sigmas <= 0:
        raise ConfigError('ci_sigmas', 'must be positive, got {!r}'.format(
            ci_sigmas))
    tolerance = _real(config, 'tolerance')
    if tolerance < 0:
        raise ConfigError('tolerance', 'must be >= 0, got {!r}'.format(
            tolerance))
    output = config['output']
    if not isinstance(output, str) or not output:
        raise ConfigError('output', 'must be a path, got {!r}'.format(output))

    return ExperimentConfig(
        experiment=experiment,
        space=space_spec,
        d_H=d_H,
        grid=grid,
        paths=_integer(config, 'paths', minimum=2),
        p=p,
        seed=_integer(config, 'seed', minimum=0,
                      maximum=utils.MAX_SEED - 1),
        mode=_choice(config, 'mode', MODES),
        oracle_depth=oracle_depth,
        n_processes=_integer(config, 'n_processes', minimum=1),
        mc_samples=_integer(config, 'mc_samples', minimum=2),
        block_size=_integer(config, 'block_size', minimum=1),
        gaussian_method=_choice(config, 'gaussian_method',
                                utils.GAUSSIAN_METHODS),
        ci_sigmas=ci_sigmas,
        tolerance=tolerance,
        output=output,
        format=_choice(config, 'format', FORMATS),
        workers=_integer(config, 'workers', minimum=1))


def parse_config(text, overrides=None, defaults=None):
    """Parse a YAML config document into an ExperimentConfig.

    Parameters
    ----------
    text : str
        The YAML document; empty text selects all defaults.
    overrides : dict, optional
        Flag values applied after the document (flags win).
    defaults : dict, optional
        Default settings, read from configs/default_harness.yaml if None.

    Raises
    ------
    ConfigError
        For malformed documents, unknown keys, out-of-range values and
        budget violations.
    """
    try:
        custom_settings = yaml.safe_load(text)
    except yaml.YAMLError as error:
        raise ConfigError('<document>', 'not valid YAML: {}'.format(error))
    if custom_settings is None:
        custom_settings = {}
    if not isinstance(custom_settings, dict):
        raise ConfigError('<document>', 'expected a mapping of keys')
    if defaults is None:
        defaults = load_defaults()
    config = merge_settings(defaults, custom_settings)
    config = apply_overrides(config, overrides)
    logger.debug('Merged config: %r', config)
    return validate(config)


def load_config(path, overrides=None):
    with open(path, 'r') as stream:
        return parse_config(stream.read(), overrides)
