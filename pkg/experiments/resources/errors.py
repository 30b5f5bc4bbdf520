"""Exception types raised by the harness.

All of them derive from builtin exception families so callers may keep
catching ``ValueError`` / ``RuntimeError`` as usual.
"""


class InputError(ValueError):
    """Invalid argument: wrong shape, out of range, misaligned, ..."""


class UnsupportedMethodError(NotImplementedError):
    """A norm evaluator was asked for a target space it does not cover."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed its size budget.

    Parameters
    ----------
    what : str
        What was to be enumerated.
    requested : int
        Requested size (e.g. number of sign bits).
    allowed : int
        Maximum allowed size.
    """

    def __init__(self, what, requested, allowed):
        self.what = what
        self.requested = requested
        self.allowed = allowed
        RuntimeError.__init__(
            self,
            'Refusing to enumerate {}: requested {} (2^{} leaves), '
            'budget is {} (2^{} leaves)'.format(
                what, requested, requested, allowed, allowed))


class ConfigError(ValueError):
    """Invalid configuration value, carrying the offending key path."""

    def __init__(self, key_path, reason):
        self.key_path = key_path
        self.reason = reason
        ValueError.__init__(self, '{}: {}'.format(key_path, reason))
