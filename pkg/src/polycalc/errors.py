"""Exception hierarchy and the enumeration budget."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10**6


class PolycalcError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class TypeMismatch(PolycalcError):
    pass


class InvalidStructure(PolycalcError):
    pass


class BudgetExceeded(PolycalcError):
    def __init__(self, needed, budget, what="enumeration"):
        super().__init__(f"{what} needs {needed} candidates, budget is {budget}")
        self.needed = needed
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get("POLYCALC_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise PolycalcError(f"POLYCALC_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise PolycalcError("POLYCALC_BUDGET must be positive")
    return value


def check_budget(needed: int, budget: int | None, what: str = "enumeration") -> None:
    if budget is None:
        budget = default_budget()
    if needed > budget:
        raise BudgetExceeded(needed, budget, what)


class Counter:
    """Counts visited candidates during a backtracking search."""

    __slots__ = ("budget", "used", "what")

    def __init__(self, budget: int | None, what: str = "search"):
        self.budget = default_budget() if budget is None else budget
        self.used = 0
        self.what = what

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.budget:
            raise BudgetExceeded(self.used, self.budget, self.what)
