"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter is invalid or out of its documented domain."""


class ResourceBudgetError(RuntimeError):
    """An operation would exceed its enumeration budget.

    Raised instead of silently truncating; callers can retry with a
    Monte Carlo surrogate or smaller parameters.
    """
