"""Exception types shared across the package."""


class UpcallError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(UpcallError):
    """Invalid parameters or configuration."""


class DataError(UpcallError):
    """Input data that cannot be processed (missing, malformed, wrong format)."""


class ConvergenceError(UpcallError):
    """An iterative solver exhausted its iteration budget."""
