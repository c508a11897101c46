"""Exception hierarchy.

Each class carries the process exit code the CLI uses when it escapes.
"""
from __future__ import annotations


class LehmerError(Exception):
    exit_code = 1


class InputError(LehmerError, ValueError):
    """Malformed argument or configuration."""

    exit_code = 2


class PolynomialSyntaxError(InputError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class HypothesisViolation(LehmerError):
    """An input violates a hypothesis of the computation (roots of unity, bad reduction, ...)."""

    exit_code = 3


class CyclotomicCollision(HypothesisViolation):
    """f shares a root with X^n - 1, so the valuation sum is infinite."""


class BadReductionError(HypothesisViolation):
    pass


class TorsionPointError(HypothesisViolation):
    pass


class FactorizationError(InputError):
    pass


class PrecisionExhausted(LehmerError):
    exit_code = 4

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class BoundViolation(LehmerError):
    """A measured height fell below a proven lower bound."""

    exit_code = 5
