"""Exception types raised by qoemetrics."""


class QoEError(Exception):
    """Base class for all qoemetrics errors."""


class DomainError(QoEError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedOperation(QoEError):
    """The operation is not defined for the given rating scale."""


class NoInformationError(QoEError, ValueError):
    """The data carries no information about the requested quantity."""


class ValidationError(QoEError):
    """A dataset violates one or more invariants.

    ``violations`` holds every :class:`~qoemetrics.types.Violation` found.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0] if self.violations else "invalid dataset"
        extra = len(self.violations) - 1
        msg = str(first) if extra <= 0 else f"{first} (and {extra} more)"
        super().__init__(msg)


class ParseError(QoEError):
    """Malformed input file. ``line`` is 1-based, ``column`` the field name if known."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        loc = []
        if path is not None:
            loc.append(str(path))
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"column {column}")
        prefix = ":".join(loc)
        super().__init__(f"{prefix}: {message}" if prefix else message)
