'''Ordered block processing on a pool of worker processes.

Work is cut into blocks whose boundaries depend only on the problem size,
never on the number of workers; results are handed back in block order.
'''
import logging
from concurrent.futures import ProcessPoolExecutor

logger = logging.getLogger(__name__)


class BlockPool(object):
    def __init__(self, n_workers=1):
        """Process blocks with at most n_workers parallel processes.

        Parameters
        ----------
        n_workers : int, optional
            Maximal number of worker processes. 1 runs everything in the
            calling process.
        """
        if n_workers < 1:
            raise ValueError('n_workers must be >= 1: {!r}'.format(n_workers))
        self.n_workers = int(n_workers)

    def map(self, func, tasks):
        """Apply func to every task and return the results in task order.

        Parameters
        ----------
        func : callable
            A picklable (module level) function of one argument.
        tasks : sequence
            The block descriptions.

        Returns
        -------
        list
            func(task) for every task, in the order of ``tasks``.
        """
        tasks = list(tasks)
        logger.debug('Processing %d blocks with max. %d workers',
                     len(tasks), self.n_workers)
        if self.n_workers == 1 or len(tasks) <= 1:
            return [func(task) for task in tasks]
        n_workers = min(self.n_workers, len(tasks))
        with ProcessPoolExecutor(max_workers=n_workers) as executor:
            return list(executor.map(func, tasks))
