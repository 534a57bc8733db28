"""Shared exception types."""


class ParseError(ValueError):
    """Raised on malformed symbol text; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DomainError(ValueError):
    """Raised when an operation is applied outside its mathematical domain."""


class ConfigError(ValueError):
    """Raised on invalid configuration or parameter values."""
