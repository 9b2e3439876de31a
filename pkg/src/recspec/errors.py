"""Exception types shared across modules."""

from __future__ import annotations


class SemanticError(Exception):
    """A well-formed input violates a precondition (unknown name, uncovered
    free variable, exceeded bound, ...)."""


class BudgetExceededError(SemanticError):
    """Enumeration refused: the raw candidate count is over budget."""

    def __init__(self, raw_count: int, budget: int):
        super().__init__(
            f"enumeration of {raw_count} candidates exceeds budget {budget}"
        )
        self.raw_count = raw_count
        self.budget = budget


class LimitExceededError(SemanticError):
    """State-space exploration hit its configured state limit."""

    def __init__(self, limit: int, what: str = "configurations"):
        super().__init__(f"exploration exceeded {limit} {what}")
        self.limit = limit


class InternalInconsistencyError(Exception):
    """Two implementations of the same semantic judgement disagreed."""
