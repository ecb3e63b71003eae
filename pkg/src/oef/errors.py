"""Exception types shared across the package."""


class OefError(Exception):
    """Base class for all errors raised by :mod:`oef`."""


class DomainError(OefError, ValueError):
    """An argument lies outside the domain of the model (e.g. a non-positive rate)."""


class CapacityError(OefError):
    """The requested full chain exceeds the configured state cap."""


class NumericError(OefError, ArithmeticError):
    """A numerical routine produced non-finite or inaccurate output."""


class ConfigError(OefError):
    """An experiment configuration failed validation."""

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
