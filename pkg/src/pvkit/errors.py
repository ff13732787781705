"""Exception hierarchy shared by every pvkit module."""

from __future__ import annotations


class PVKitError(Exception):
    """Base class for all pvkit failures."""


class ParseError(PVKitError, ValueError):
    """Malformed integrand text.

    ``position`` is 1-based; end-of-input errors point one past the last
    character.
    """

    def __init__(self, message: str, position: int, source: str = ""):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.source = source


class ExprSyntaxError(ParseError):
    pass


class UnknownIdentifierError(ParseError):
    pass


class MultipleVariablesError(ParseError):
    pass


class EvaluationError(PVKitError, ArithmeticError):
    """An expression could not be evaluated to a finite complex number."""


class DivisionByZeroError(EvaluationError):
    pass


class DomainError(EvaluationError):
    pass


class NonFiniteError(EvaluationError):
    pass


class PathError(PVKitError, ValueError):
    """Invalid contour geometry or parameter outside a path's domain."""


class NonConvergenceError(PVKitError):
    """A numerical limit did not reach the requested tolerance.

    ``result`` carries the best available estimate and its diagnostics.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class DecayHypothesisError(PVKitError, ValueError):
    """The half-plane decay needed for a closed-form PV value is not established."""
