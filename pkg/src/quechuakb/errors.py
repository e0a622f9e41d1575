"""Exception hierarchy; each class carries the CLI exit code for its failure class."""


class KeyboardError(Exception):
    exit_code = 1


class ParseError(KeyboardError):
    """Malformed input document."""

    exit_code = 2


class ValidationError(KeyboardError):
    """Input parsed but violates a data invariant."""

    exit_code = 3

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class UnknownNameError(ValidationError, KeyError):
    """Unknown built-in profile, geometry, layout or style."""

    def __str__(self):
        return Exception.__str__(self)


class ConfigError(ValidationError):
    """Invalid optimizer or effort configuration."""


class CapacityError(KeyboardError):
    """More graphemes than free slots, or an instance too large to enumerate."""

    exit_code = 4


class DataIOError(KeyboardError, OSError):
    exit_code = 5


class EncodingError(DataIOError):
    """Input is not valid UTF-8."""

    def __init__(self, message, offset):
        super().__init__(message)
        self.offset = offset


class DomainError(KeyboardError, ValueError):
    """Arithmetic on an empty table or a zero baseline."""

    exit_code = 6
