"""Exception hierarchy shared by every module."""


class UsageError(ValueError):
    """A caller violated a documented precondition."""


class ValidationError(ValueError):
    """An explicit multiplication table fails a group axiom."""


class CapacityError(RuntimeError):
    """An input exceeds a hard size cap for the requested method."""


class BudgetError(RuntimeError):
    """A campaign's estimated work exceeds the configured budget."""


class InternalConsistencyError(RuntimeError):
    """Two independent engines disagreed, or a certified-impossible outcome
    occurred; either way it signals an implementation bug, not bad input."""
