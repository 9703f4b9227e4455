"""Exception hierarchy shared by all balkit modules."""

from __future__ import annotations


class BalkitError(Exception):
    """Base class for library errors."""


class DomainError(BalkitError, ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(DomainError):
    """A documented precondition on the input charge is violated."""


class ConvergenceError(BalkitError, RuntimeError):
    """An iterative or adaptive procedure ran out of budget.

    The best value obtained so far is kept in ``partial`` together with its
    error estimate so callers can decide whether it is still usable.
    """

    def __init__(self, message: str, partial: float = float("nan"),
                 error: float = float("inf")):
        super().__init__(message)
        self.partial = partial
        self.error = error
