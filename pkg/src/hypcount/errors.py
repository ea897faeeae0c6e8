"""Exception types shared across the package."""


class HypcountError(Exception):
    """Base class for all package-specific errors."""


class BoundTooLargeError(HypcountError):
    """An enumeration bound implies entry ranges beyond the supported scan size."""

    def __init__(self, message, attempted_range=None):
        super().__init__(message)
        self.attempted_range = attempted_range


class OracleRangeError(HypcountError):
    """Requested evaluation is outside the supported oracle range."""


class ConvergenceError(HypcountError):
    """An iterative evaluation failed to converge within its budget."""


class CacheError(HypcountError):
    """Base class for enumeration-cache I/O failures."""


class CacheVersionError(CacheError):
    """Cache file carries an unsupported version tag."""


class CacheFormatError(CacheError):
    """Cache file has a malformed header or row."""


class CacheInvariantError(CacheError):
    """Cache row violates a matrix invariant (determinant or canonical sign)."""


class PrecisionError(HypcountError):
    """A check's truncation/tolerance preconditions are not met."""
