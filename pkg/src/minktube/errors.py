"""Exception types shared across the package."""


class MinktubeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MinktubeError, ValueError):
    """An argument is outside the documented domain of an operation."""


class DataError(MinktubeError, ValueError):
    """A tube evaluation produced unusable data (non-positive or non-finite).

    Carries the offending epsilon so callers can identify the schedule point.
    """

    def __init__(self, message: str, eps: float | None = None):
        super().__init__(message)
        self.eps = eps


class ConvergenceError(MinktubeError, RuntimeError):
    """Adaptive quadrature exhausted its budget before reaching tolerance."""

    def __init__(self, message: str, achieved: float, target: float):
        super().__init__(message)
        self.achieved = achieved
        self.target = target


class ResolutionError(MinktubeError, RuntimeError):
    """A requested resolution exceeds a configured depth or cell budget."""


class UnsupportedError(MinktubeError, TypeError):
    """The operation does not support this input kind or configuration."""


class ConfigError(MinktubeError, ValueError):
    """An experiment configuration file is malformed or inconsistent."""
