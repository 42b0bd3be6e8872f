"""Exception types raised by the bound recursions and solvers."""

from __future__ import annotations


class NumericalDegeneracyError(ArithmeticError):
    """An inner matrix in an information recursion is not positive definite.

    Carries the block index at which the factorization failed so sweeps
    can report the offending step.
    """

    def __init__(self, message: str, block: int | None = None):
        super().__init__(message)
        self.block = block


class QuadratureError(ArithmeticError):
    """A quadrature rule produced a non-finite node or weight contribution."""

    def __init__(self, message: str, node: float | None = None):
        super().__init__(message)
        self.node = node


class ConvergenceError(ArithmeticError):
    """A fixed-point iteration hit its iteration cap before converging.

    The last two iterates are kept so callers can report how far the
    iteration still was from its target.
    """

    def __init__(self, message: str, last_iterates: tuple[float, float] | None = None):
        super().__init__(message)
        self.last_iterates = last_iterates
