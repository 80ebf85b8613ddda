"""Exception types raised across the package."""


class QDError(Exception):
    """Base class for all qdforge errors."""


class DimensionMismatch(QDError, ValueError):
    pass


class NonFiniteValue(QDError, ValueError):
    pass


class InvalidBounds(QDError, ValueError):
    pass


class EmptyArchive(QDError, LookupError):
    pass


class DegenerateData(QDError, ValueError):
    pass


class ParseError(QDError, ValueError):
    """Config file could not be decoded. Carries the offending line when known."""

    def __init__(self, message, line=None, field=None):
        super().__init__(message)
        self.line = line
        self.field = field


class ValidationError(QDError, ValueError):
    """A config or parameter value is out of its allowed domain."""

    def __init__(self, field, message=None):
        super().__init__(message or field)
        self.field = field
