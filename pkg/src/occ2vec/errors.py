"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: input problems exit 2, refusals to
overwrite exit 3, numerical failures exit 4.
"""


class Occ2VecError(Exception):
    """Base class for all toolkit errors."""


class InputError(Occ2VecError):
    """Bad or missing input data: files, rows, malformed requests."""


class RangeError(InputError):
    """A value fell outside its declared scale range."""


class DegenerateInputError(Occ2VecError):
    """Numerically degenerate input (zero variance, constant vector, ...)."""


class NumericalError(Occ2VecError):
    """An iterative procedure failed to converge or produced non-finite values."""


class TransportError(Occ2VecError):
    """Remote embedding backend unreachable after bounded retries."""


class CacheError(Occ2VecError):
    """Vector cache file is corrupt or inconsistent."""
