"""Shared exception types."""


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold for the given input."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class CapacityError(ValueError):
    """Requested table or search size exceeds the configured cap."""


class BudgetError(RuntimeError):
    """Estimated cost of the computation exceeds the allowed budget."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ImpossibleInputError(ValueError):
    """No output exists for the given input (proven by exhaustion)."""
