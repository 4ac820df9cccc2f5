class KeygraphError(Exception):
    """Base class for every error raised by this package."""


class SchemeValidationError(KeygraphError, ValueError):
    """Raised when raw scheme parameters violate a structural invariant."""


class ParameterRangeError(KeygraphError, ValueError):
    """Raised when an operation receives an argument outside its domain."""


class InfeasibleDimensioningError(KeygraphError):
    """Raised when no ring size within the pool reaches the target constant."""


class ConfigError(KeygraphError, ValueError):
    """Raised for malformed run configuration or environment settings."""


__all__ = [
    "KeygraphError",
    "SchemeValidationError",
    "ParameterRangeError",
    "InfeasibleDimensioningError",
    "ConfigError",
]
