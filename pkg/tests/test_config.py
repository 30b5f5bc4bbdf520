import glob
import os

import pytest

from experiments.resources.config import (DEFAULT_CONFIG, SCRIPT_FOLDER,
                                          load_config, load_defaults,
                                          merge_settings, parse_config)
from experiments.resources.errors import ConfigError
from experiments.resources.spaces import BanachSpaceSpec, TimeGrid


def test_empty_document_gives_defaults():
    cfg = parse_config('')
    defaults = load_defaults()
    assert cfg.paths == defaults['paths']
    assert cfg.space == BanachSpaceSpec.hilbert(defaults['space']['d_E'])
    assert cfg.grid == TimeGrid(1., defaults['grid']['N_t'])
    assert cfg.hilbert.dim == defaults['d_H']
    assert cfg.experiment is None


def test_sections_merge_key_by_key():
    cfg = parse_config('space:\n  variant: lq\n  q: 4\ngrid:\n  N_t: 8\n')
    assert cfg.space == BanachSpaceSpec.lq(4, 4.)
    assert cfg.grid == TimeGrid(1., 8)


def test_overrides_win():
    cfg = parse_config('paths: 500\nseed: 3\n',
                       {'paths': 1000, 'seed': None, 'grid.T': 2.})
    assert cfg.paths == 1000
    assert cfg.seed == 3
    assert cfg.grid.horizon == 2.


def test_weights():
    cfg = parse_config('space:\n  variant: lq\n  d_E: 2\n  q: 3\n'
                       '  weights: [1, 0.5]\n')
    assert list(cfg.space.weights) == [1., 0.5]


@pytest.mark.parametrize('document, key_path', [
    ('colour: blue', 'colour'),
    ('space:\n  norm: 2', 'space.norm'),
    ('space: 3', 'space'),
    ('space:\n  variant: banach', 'space.variant'),
    ('space:\n  variant: lq\n  q: 1', 'space.q'),
    ('space:\n  variant: lq\n  d_E: 2\n  weights: [1, -1]',
     'space.weights'),
    ('space:\n  d_E: 0', 'space.d_E'),
    ('grid:\n  T: 0', 'grid.T'),
    ('grid:\n  N_t: 2.5', 'grid.N_t'),
    ('paths: 1', 'paths'),
    ('paths: true', 'paths'),
    ('p: 0.5', 'p'),
    ('seed: -1', 'seed'),
    ('mode: levy', 'mode'),
    ('oracle_depth: 13', 'oracle_depth'),
    ('gaussian_method: box_muller', 'gaussian_method'),
    ('ci_sigmas: 0', 'ci_sigmas'),
    ('tolerance: -1.0e-3', 'tolerance'),
    ('format: xml', 'format'),
    ('output: ""', 'output'),
    ('workers: 0', 'workers'),
    ('experiment: 12', 'experiment'),
    ('[1, 2]', '<document>'),
    ('paths: [1, 2', '<document>'),
])
def test_invalid_documents_name_the_key(document, key_path):
    with pytest.raises(ConfigError) as error:
        parse_config(document)
    assert error.value.key_path == key_path
    assert str(error.value).startswith(key_path)


def test_unknown_override_is_rejected():
    with pytest.raises(ConfigError):
        parse_config('', {'depth': 3})
    with pytest.raises(ConfigError):
        parse_config('', {'grid.dt': 0.1})


def test_merge_leaves_defaults_untouched():
    defaults = load_defaults()
    merge_settings(defaults, {'grid': {'N_t': 3}})
    assert defaults['grid']['N_t'] == load_defaults()['grid']['N_t']


def test_echo_is_nested_like_the_document():
    echo = parse_config('space:\n  variant: lq\n  q: 4').echo()
    assert echo['space']['variant'] == 'lq'
    assert echo['space']['q'] == 4.
    assert echo['grid'] == {'T': 1., 'N_t': 16}


def test_sampling_options_and_version():
    cfg = parse_config('gaussian_method: inverse_cdf\nblock_size: 64\n')
    assert cfg.sampling_options == dict(gaussian_method='inverse_cdf',
                                        block_size=64, workers=1)
    assert cfg.generator_version.startswith('philox4x64/inverse_cdf/b64/')


def test_default_file_is_shipped():
    assert os.path.exists(DEFAULT_CONFIG)


@pytest.mark.parametrize('path', sorted(glob.glob(os.path.join(
    SCRIPT_FOLDER, 'configs', '*.yaml'))))
def test_shipped_configs_are_valid(path):
    if os.path.basename(path) in ('suite.yaml', 'default_harness.yaml'):
        return
    cfg = load_config(path)
    assert cfg.experiment is not None
