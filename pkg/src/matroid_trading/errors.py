"""Exception types shared across the package."""


class TradingError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TradingError, ValueError):
    """An argument or configuration value violates a precondition."""


class CapacityError(TradingError):
    """A request exceeds an enumeration or size limit."""


class InvalidMatroidError(TradingError):
    """A structure that must be a (loopless) matroid is not one."""


class UnsupportedKindError(TradingError):
    """An operation was applied to a matroid kind it does not support."""


class ConfigError(InputError):
    """A config file could not be parsed; carries the offending field path."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
