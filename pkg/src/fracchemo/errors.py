"""Exception types shared across the package."""


class FracChemoError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(FracChemoError, ValueError):
    """A parameter lies outside its admissible range."""


class NumericError(FracChemoError, ArithmeticError):
    """A numeric invariant failed (NaN/Inf input, lost symmetry, ...)."""


class ContractionError(FracChemoError, RuntimeError):
    """Fixed-point iteration failed to contract at any admissible horizon."""


class ConfigError(FracChemoError, ValueError):
    """A configuration file is malformed or violates an invariant."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")
