"""Exception hierarchy shared across the package.

The CLI maps these onto exit-code categories: configuration problems (2),
file-format problems (3), and compute/estimation failures (4).
"""


class TriphotonError(Exception):
    """Base class for all package errors."""


class StructuralError(TriphotonError):
    """Invalid structure of an input object (ladder, routing, histogram axes,
    unsorted stream, ...)."""


class ConfigError(TriphotonError):
    """Run-configuration file or CLI parameter error."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FormatError(TriphotonError):
    """Malformed binary time-tag file."""


class DegenerateLadderError(TriphotonError):
    """Rate generator has a null space of dimension > 1 (disconnected ladder)."""


class NormalizationError(TriphotonError):
    """Steady-state flux is zero, so g2 normalization is undefined."""


class EstimationError(TriphotonError):
    """Not enough data to estimate accidental levels."""


class SizeError(TriphotonError):
    """Requested histogram would exceed the configured size limits."""


class FitError(TriphotonError):
    """Nonlinear fit did not converge or had degenerate input."""

    def __init__(self, message, best_params=None):
        super().__init__(message)
        self.best_params = best_params
