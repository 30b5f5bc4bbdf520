import os

import pytest

from experiments.resources.config import load_config
from experiments.resources.paths import sample_paths
from experiments.resources.spaces import BanachSpaceSpec, HilbertSpec, TimeGrid
from harness_scripts import fetch_experiment

SEED = 1337
N_PATHS = 4000


@pytest.fixture
def grid():
    return TimeGrid(1., 4)


@pytest.fixture
def hilbert():
    return HilbertSpec(2)


@pytest.fixture
def euclidean():
    return BanachSpaceSpec.hilbert(3)


@pytest.fixture
def l4():
    return BanachSpaceSpec.lq(3, 4.)


@pytest.fixture
def bundle(grid, hilbert):
    return sample_paths(grid, hilbert.dim, N_PATHS, SEED)


@pytest.fixture
def small_config(tmpdir):
    """Catalog default config of an experiment shrunk to test size."""
    def make(name, **overrides):
        settings = {'paths': 2000, 'n_processes': 2, 'mc_samples': 2000,
                    'output': os.path.join(str(tmpdir), name + '.csv')}
        settings.update(overrides)
        return load_config(fetch_experiment(name)['default_config'],
                           settings)
    return make
