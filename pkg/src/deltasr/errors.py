"""Exception hierarchy shared by every module."""


class DeltaSRError(Exception):
    """Base class for all library errors."""


class ShapeError(DeltaSRError, ValueError):
    """An input vector has the wrong length or an illegal entry."""


class StructureError(DeltaSRError, ValueError):
    """A node graph is malformed (dangling child, cycle, bad label)."""


class ParseError(DeltaSRError, ValueError):
    """A text document could not be parsed.

    ``line`` is 1-based, or ``None`` when the problem is not tied to a line.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceeded(DeltaSRError, RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""


class ParameterError(DeltaSRError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class PreconditionError(DeltaSRError, ValueError):
    """A check was asked to run on an input that violates its premise."""
