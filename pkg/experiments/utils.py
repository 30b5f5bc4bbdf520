'''Random stream construction shared by every experiment.

Each stream is identified by (seed, purpose, block): the purpose tag and the
block number occupy the two high words of a Philox 4x64 counter, the seed is
the key. Draws advance the low words only, so distinct (purpose, block) pairs
never overlap and a block always reproduces the same numbers regardless of
which worker computes it.
'''
import numpy as np
from scipy import special

MAX_SEED = 2**64
MAX_BLOCK_NUMBER = 2**32
GENERATOR_FAMILY = 'philox4x64'
GAUSSIAN_METHODS = ('ziggurat', 'inverse_cdf')
STABILITY_SEEDS = 5
# seeds of the stability reruns sit far from the per-integrand offsets
STABILITY_STRIDE = 2**32

# purpose tags -> high counter word
PURPOSES = {
    'increments': 1,
    'decoupled': 2,
    'gamma_mc': 3,
    'example29': 4,
    'covariance': 5,
    'processes': 6,
    'umd': 7,
    'oracle': 8,
    'fubini': 9,
}


def create_random_stream(seed, purpose, block=0):
    """Create the generator of one (seed, purpose, block) stream.

    Parameters
    ----------
    seed : int
        Master seed, 0 <= seed < 2^64.
    purpose : str
        One of the keys of PURPOSES.
    block : int, optional
        Block number, 0 <= block < 2^32.

    Returns
    -------
    np.random.Generator
        Generator backed by a Philox bit generator.
    """
    if seed < 0 or seed >= MAX_SEED:
        raise RuntimeError('seed {!r} outside [0, 2^64)'.format(seed))
    if block < 0 or block >= MAX_BLOCK_NUMBER:
        raise RuntimeError('block numbers >= {} are not supported: '
                           '{!r}'.format(MAX_BLOCK_NUMBER, block))
    try:
        purpose_tag = PURPOSES[purpose]
    except KeyError:
        raise RuntimeError('Unknown stream purpose: {!r}'.format(purpose))
    counter = np.array([0, 0, block, purpose_tag], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=int(seed),
                                                counter=counter))


def standard_normal(rng, size, method='ziggurat'):
    """Draw standard normal variates with the configured transform."""
    if method == 'ziggurat':
        return rng.standard_normal(size)
    elif method == 'inverse_cdf':
        # uniforms on the open interval (0, 1) with 53 random bits
        k = rng.integers(0, 2**53, size=size, dtype=np.int64)
        return special.ndtri((k + 0.5) / 2.**53)
    raise ValueError('Gaussian method unknown: {!r}'.format(method))


def rademacher(rng, size):
    """Draw independent symmetric signs."""
    return rng.integers(0, 2, size=size).astype(float) * 2. - 1.


def split_blocks(n_rows, block_size):
    """Row ranges [start, stop) of the fixed blocks covering n_rows."""
    if block_size < 1:
        raise ValueError('block_size must be >= 1: {!r}'.format(block_size))
    starts = range(0, n_rows, block_size)
    return [(start, min(start + block_size, n_rows)) for start in starts]


def generator_version(gaussian_method, block_size, generator_tag):
    """Version string written to every report row."""
    return '{}/{}/b{}/{}'.format(GENERATOR_FAMILY, gaussian_method,
                                 block_size, generator_tag)


def sample_bundle(cfg, grid=None, d_H=None):
    """Paths for an experiment, drawn with the configured sampling options."""
    from .resources.paths import sample_paths
    grid = cfg.grid if grid is None else grid
    d_H = cfg.d_H if d_H is None else d_H
    return sample_paths(grid, d_H, cfg.paths, cfg.seed, cfg.mode,
                        **cfg.sampling_options)


def ci_contains(ratio, value=1.):
    """True if a (ratio, ci_low, ci_high) triple covers value."""
    _, ci_low, ci_high = ratio
    return bool(ci_low <= value <= ci_high)


def derived_seed(seed, index):
    """Seed of the index-th Monte Carlo evaluation within an experiment."""
    return (seed + index) % MAX_SEED


def mc_options(cfg):
    """Keyword arguments of the Monte Carlo gamma norm evaluators."""
    return dict(n_samples=cfg.mc_samples, gaussian_method=cfg.gaussian_method,
                block_size=cfg.block_size, workers=cfg.workers)


def stability_seeds(seed, n_seeds=STABILITY_SEEDS):
    """Independent seeds of a band stability check, starting with seed."""
    return [derived_seed(seed, k * STABILITY_STRIDE) for k in range(n_seeds)]


def recorded_band(cfg, rows, measure, predicate):
    """Seed band of the rows declaring ``predicate``.

    The ratios of ``rows`` count for cfg.seed; ``measure(cfg)`` is rerun under
    each further stability seed.
    """
    from .resources.statistics import seed_band

    def ratios(rows):
        return [row.ratio for row in rows
                if row.predicate.startswith(predicate)]

    seeds = stability_seeds(cfg.seed)
    ratio_sets = [ratios(rows)]
    for seed in seeds[1:]:
        ratio_sets.append(ratios(measure(cfg.replace(seed=seed))))
    return seed_band(ratio_sets, seeds)
