"""Exception hierarchy shared by every pstlab module."""


class PSTLabError(Exception):
    """Base class for library errors."""


class ValidationError(PSTLabError, ValueError):
    """Input data violates a documented precondition."""


class NumericalError(PSTLabError, ArithmeticError):
    """A numerical routine failed or produced an inconsistent result."""


class ConvergenceError(NumericalError):
    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class SurgeryRefused(ValidationError):
    """Christoffel weights would not stay positive on the surviving nodes."""

    def __init__(self, message, offending_nodes=()):
        super().__init__(message)
        self.offending_nodes = tuple(offending_nodes)
