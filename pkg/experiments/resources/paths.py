'''Sampled increments of an H-cylindrical Brownian motion.

A PathBundle carries the increments dW[m][i][k] = W_H(t_{i+1})h_k -
W_H(t_i)h_k of M paths together with an independent copy used for decoupled
integrals. Both are drawn block by block from disjoint counter ranges of the
same seed.
'''
from __future__ import division

import logging
import struct
from dataclasses import dataclass

import numpy as np

from .. import utils
from .errors import InputError
from .parallel import BlockPool
from .spaces import HilbertSpec, TimeGrid, frozen_array

logger = logging.getLogger(__name__)

GAUSSIAN = 'gaussian'
RADEMACHER = 'rademacher'
MODES = (GAUSSIAN, RADEMACHER)

DUMP_MAGIC = b'GFPB'
DUMP_VERSION = 1
# magic, version u32, M u64, N_t u32, d_H u32, mode u8, seed u64
DUMP_HEADER = struct.Struct('<4sIQIIBQ')


@dataclass(frozen=True)
class PathBundle:
    """Increments of W_H and of an independent copy.

    Parameters
    ----------
    grid : TimeGrid
        The time grid.
    hilbert : HilbertSpec
        The space H.
    increments : np.ndarray, shape (M, N_t, d_H)
        Increments of W_H.
    decoupled : np.ndarray, shape (M, N_t, d_H)
        Increments of the independent copy.
    mode : str
        'gaussian' or 'rademacher'.
    seed : int
        Master seed the bundle was drawn with.
    gaussian_method : str
        Transform used for Gaussian draws.
    block_size : int
        Paths per random stream block.
    """
    grid: TimeGrid
    hilbert: HilbertSpec
    increments: np.ndarray
    decoupled: np.ndarray
    mode: str
    seed: int
    gaussian_method: str = 'ziggurat'
    block_size: int = 4096

    def __post_init__(self):
        shape = (self.grid.n_bins, self.hilbert.dim)
        for name in ('increments', 'decoupled'):
            array = np.asarray(getattr(self, name), dtype=float)
            if array.ndim != 3 or array.shape[1:] != shape:
                raise InputError('{} must have shape (M, {}, {}), got '
                                 '{!r}'.format(name, shape[0], shape[1],
                                               array.shape))
            object.__setattr__(self, name, frozen_array(array))
        if self.increments.shape != self.decoupled.shape:
            raise InputError('increments and decoupled copy differ in shape')
        if self.mode not in MODES:
            raise InputError('Unknown mode: {!r}'.format(self.mode))

    @property
    def n_paths(self):
        return self.increments.shape[0]

    def brownian_paths(self, decoupled=False):
        """W_H(t_i)h_k for i = 0, ..., N_t, shape (M, N_t + 1, d_H)."""
        increments = self.decoupled if decoupled else self.increments
        zero = np.zeros((self.n_paths, 1, self.hilbert.dim))
        return np.concatenate([zero, np.cumsum(increments, axis=1)], axis=1)

    def dump(self, path):
        """Write the bundle in the flat GFPB binary layout."""
        mode_byte = MODES.index(self.mode)
        header = DUMP_HEADER.pack(DUMP_MAGIC, DUMP_VERSION, self.n_paths,
                                  self.grid.n_bins, self.hilbert.dim,
                                  mode_byte, self.seed)
        with open(path, 'wb') as open_file:
            open_file.write(header)
            open_file.write(np.ascontiguousarray(
                self.increments, dtype='<f8').tobytes())
            open_file.write(np.ascontiguousarray(
                self.decoupled, dtype='<f8').tobytes())

    @classmethod
    def load(cls, path, horizon):
        """Read a GFPB file. The horizon T is not part of the layout."""
        with open(path, 'rb') as open_file:
            content = open_file.read()
        if len(content) < DUMP_HEADER.size:
            raise InputError('{} is too short for a GFPB header'.format(path))
        magic, version, n_paths, n_bins, d_H, mode_byte, seed = \
            DUMP_HEADER.unpack_from(content)
        if magic != DUMP_MAGIC:
            raise InputError('{} is not a GFPB file: {!r}'.format(
                path, magic))
        if version != DUMP_VERSION:
            raise InputError('Unsupported GFPB version: {!r}'.format(version))
        if mode_byte >= len(MODES):
            raise InputError('Unknown mode byte: {!r}'.format(mode_byte))
        n_values = n_paths * n_bins * d_H
        data = np.frombuffer(content, dtype='<f8', offset=DUMP_HEADER.size)
        if data.size != 2 * n_values:
            raise InputError('{}: expected {} values, found {}'.format(
                path, 2 * n_values, data.size))
        shape = (n_paths, n_bins, d_H)
        return cls(TimeGrid(horizon, n_bins), HilbertSpec(d_H),
                   data[:n_values].reshape(shape),
                   data[n_values:].reshape(shape),
                   MODES[mode_byte], seed)


def _sample_block(task):
    seed, purpose, block, n_rows, n_bins, d_H, dt, mode, method = task
    rng = utils.create_random_stream(seed, purpose, block)
    size = (n_rows, n_bins, d_H)
    if mode == GAUSSIAN:
        return utils.standard_normal(rng, size, method) * np.sqrt(dt)
    return utils.rademacher(rng, size) * np.sqrt(dt)


def sample_increments(grid, d_H, n_paths, seed, purpose, mode=GAUSSIAN,
                      gaussian_method='ziggurat', block_size=4096,
                      workers=1):
    """Draw (M, N_t, d_H) increments from one stream purpose."""
    tasks = [(seed, purpose, block, stop - start, grid.n_bins, d_H, grid.dt,
              mode, gaussian_method)
             for block, (start, stop) in enumerate(
                 utils.split_blocks(n_paths, block_size))]
    return np.concatenate(BlockPool(workers).map(_sample_block, tasks))


def sample_paths(grid, d_H, n_paths, seed, mode=GAUSSIAN,
                 gaussian_method='ziggurat', block_size=4096, workers=1):
    """Sample M paths of an H-cylindrical Brownian motion and a copy.

    Parameters
    ----------
    grid : TimeGrid
        The time grid.
    d_H : int
        Dimension of H.
    n_paths : int
        Number of paths M >= 1.
    seed : int
        Master seed.
    mode : str, optional
        'gaussian' (increments N(0, dt)) or 'rademacher' (+-sqrt(dt)).
    gaussian_method : str, optional
        'ziggurat' or 'inverse_cdf'.
    block_size : int, optional
        Paths per random stream block; part of the seeding contract.
    workers : int, optional
        Worker processes; never changes the result.

    Returns
    -------
    PathBundle
    """
    if n_paths < 1:
        raise InputError('need at least one path: {!r}'.format(n_paths))
    if mode not in MODES:
        raise InputError('Unknown mode: {!r}'.format(mode))
    hilbert = HilbertSpec(d_H)
    logger.debug('Sampling %d paths of %d bins x %d coordinates (%s)',
                 n_paths, grid.n_bins, d_H, mode)
    options = dict(mode=mode, gaussian_method=gaussian_method,
                   block_size=block_size, workers=workers)
    increments = sample_increments(grid, d_H, n_paths, seed, 'increments',
                                   **options)
    decoupled = sample_increments(grid, d_H, n_paths, seed, 'decoupled',
                                  **options)
    return PathBundle(grid, hilbert, increments, decoupled, mode, seed,
                      gaussian_method, block_size)
