"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CantorError(Exception):
    """Base class for all library errors."""


class DomainError(CantorError):
    """An input violates a mathematical precondition."""


class InvalidDigitSet(DomainError):
    pass


class InvalidCode(DomainError):
    pass


class NotSparse(DomainError):
    pass


class NotUniform(DomainError):
    pass


class NotInF(DomainError):
    """The translation does not belong to the difference set C - C."""


class NotRepresentable(DomainError):
    pass


class SigmaNotPM(DomainError):
    """The case trace leaves {+1, -1} where the operation needs it to stay."""


class FiniteRepresentation(DomainError):
    """The value has a terminating base-n expansion."""


class BadDelta(DomainError):
    pass


class NotApplicable(DomainError):
    pass


class BudgetExceeded(CantorError):
    def __init__(self, needed: int, budget: int):
        super().__init__(f"needs {needed} intervals, budget is {budget}")
        self.needed = needed
        self.budget = budget
