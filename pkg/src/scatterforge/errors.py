"""Exception types shared across the package.

Each maps to a CLI exit code (see ``scatterforge.cli``).
"""

from __future__ import annotations


class PreconditionError(ValueError):
    """Input violates a documented precondition."""


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, what: str, cost: int, budget: int):
        super().__init__(f"{what}: estimated cost {cost} exceeds budget {budget}")
        self.what = what
        self.cost = cost
        self.budget = budget


class InvariantBreach(AssertionError):
    """A proven implication or internal consistency check failed."""


DEFAULT_BUDGET = 1 << 24


def check_budget(what: str, cost: int, budget: int | None) -> None:
    if budget is None:
        budget = DEFAULT_BUDGET
    if cost > budget:
        raise BudgetExceeded(what, cost, budget)
