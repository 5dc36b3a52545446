"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class LabError(Exception):
    """Base class for every error raised by the package."""


class ConfigurationError(LabError):
    """Grid, band, or parameter choice cannot support the requested operation."""


class DataError(LabError):
    """Input samples are malformed (NaN, wrong length, bad file)."""


class PreconditionError(LabError):
    """A mathematical precondition of the operation does not hold."""


class DivergenceError(LabError):
    """An integral or sum was found to diverge where convergence is needed."""


class PrecisionError(LabError):
    """Requested accuracy could not be reached; carries the best partial value."""

    def __init__(self, message: str, partial: float | None = None, error: float | None = None):
        super().__init__(message)
        self.partial = partial
        self.error = error
