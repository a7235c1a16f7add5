"""Explicit resource budgets for enumeration and automaton construction.

Exactness claims depend on knowing when a computation ran to completion, so
exceeding a budget raises instead of truncating.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_ENUM = 2_000_000
DEFAULT_STATES = 50_000


class BudgetExceeded(Exception):
    def __init__(self, kind: str, needed, allowed):
        super().__init__(f"{kind} budget exceeded: needs {needed}, allowed {allowed}")
        self.kind = kind
        self.needed = needed
        self.allowed = allowed


@dataclass(frozen=True)
class Budget:
    max_enum: int = DEFAULT_ENUM
    max_states: int = DEFAULT_STATES

    def check_enum(self, needed):
        if needed > self.max_enum:
            raise BudgetExceeded("enumeration", needed, self.max_enum)

    def check_states(self, needed):
        if needed > self.max_states:
            raise BudgetExceeded("automaton", needed, self.max_states)


DEFAULT = Budget()
