"""Exception hierarchy shared by every module."""


class MultitaskError(Exception):
    """Base class for all errors raised by this package."""


class IndexOutOfRange(MultitaskError, ValueError):
    pass


class DuplicateEdge(MultitaskError, ValueError):
    def __init__(self, edge, multiplicity):
        super().__init__(f"edge {edge} given {multiplicity} times")
        self.edge = edge
        self.multiplicity = multiplicity


class InvalidEdgeId(MultitaskError, ValueError):
    pass


class NotAMatching(MultitaskError, ValueError):
    pass


class BudgetExceeded(MultitaskError):
    pass


class NoMatchingOfThatSize(MultitaskError, ValueError):
    pass


class Unbalanced(MultitaskError, ValueError):
    pass


class NotApplicable(MultitaskError, ValueError):
    pass


class NotRegular(MultitaskError, ValueError):
    pass


class DomainError(MultitaskError, ValueError):
    pass


class ConvergenceFailure(MultitaskError):
    pass


class Infeasible(MultitaskError):
    """No subgraph with the requested degrees exists.

    ``witness`` is an ``(X, Y)`` pair of vertex sets violating the factor
    criterion when one was searched for, else ``None``.
    """

    def __init__(self, message, witness=None, flow_value=None):
        super().__init__(message)
        self.witness = witness
        self.flow_value = flow_value


class RetriesExhausted(MultitaskError):
    pass


class DegenerateParameters(MultitaskError, ValueError):
    pass


class VerificationFailed(MultitaskError):
    pass


class HallViolated(MultitaskError):
    pass


class OddLength(MultitaskError, ValueError):
    pass


class InvalidPathSystem(MultitaskError, ValueError):
    pass


class NoPathSystemOfThatSize(MultitaskError, ValueError):
    pass


class FormatError(MultitaskError, ValueError):
    """Malformed graph text; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
