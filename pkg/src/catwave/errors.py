"""Exception types shared across the package."""


class CatwaveError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(CatwaveError):
    """Operands live on different or incompatible Fock spaces."""


class TruncationError(CatwaveError):
    """A constructed state lost too much norm to the Fock cutoff."""


class NumericalInvariantError(CatwaveError):
    """An evolution broke a trace/Hermiticity/positivity contract."""


class ConfigError(CatwaveError):
    """A run configuration failed schema validation."""
