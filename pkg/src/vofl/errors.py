"""Exception types shared across the package."""


class VoflError(Exception):
    """Base class for all package errors."""


class DomainError(VoflError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionError(DomainError):
    """Operation requires a spatial dimension it was not given (radial
    transforms are implemented for n = 3 only)."""


class ProfileError(VoflError, ValueError):
    """An order function violates one of its construction hypotheses."""


class ConvergenceError(VoflError, RuntimeError):
    """Quadrature or summation failed to reach the requested tolerance
    within the configured budget."""


class TableRangeError(VoflError, ValueError):
    """A spectral table was queried too far outside its sampled range, or
    an interpolated value fell below the positivity floor."""


class ConfigError(VoflError, ValueError):
    """A run configuration (file or flags) is malformed."""
