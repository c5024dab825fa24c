"""Exception hierarchy shared by every module and mapped to CLI exit codes."""

from __future__ import annotations


class PQError(Exception):
    """Base class for all errors raised by pqgamma."""

    exit_code = 1


class DomainError(PQError, ValueError):
    """Arguments outside the domain of the requested operation."""

    exit_code = 2


class ParameterRangeError(DomainError):
    """An integer parameter (for instance a binomial index) is out of range."""


class PoleError(DomainError):
    """Evaluation at (or within tolerance of) a pole of a Gamma-type function."""

    exit_code = 3


class ConvergenceError(PQError, ArithmeticError):
    """A truncated series or product did not reach its tolerance within max_terms."""

    exit_code = 4


class ParseError(PQError, ValueError):
    """Malformed command-line input or integrand expression."""

    exit_code = 5


class IntegrandError(DomainError):
    """The integrand failed at a lattice node; ``node`` records where."""

    def __init__(self, message: str, node: float) -> None:
        super().__init__(f"{message} (at t={node!r})")
        self.node = node
