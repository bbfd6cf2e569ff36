"""Exception hierarchy shared by every module."""


class CoocError(Exception):
    """Base class for all errors raised by cooctensor."""


class InvalidInput(CoocError, ValueError):
    """Input data violates a precondition (empty edge, non-finite matrix, ...)."""


class ShapeError(CoocError, ValueError):
    """Operands have incompatible shapes."""


class ModeError(CoocError, ValueError):
    """A tensor mode index is out of range."""


class CapacityError(CoocError, OverflowError):
    """A computation would exceed the tuple-visit budget or index arithmetic range.

    Attributes
    ----------
    estimate : int or None
        The offending workload estimate, when one was computed.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class RangeError(CoocError, ValueError):
    """An embedding order outside the supported range was requested."""
