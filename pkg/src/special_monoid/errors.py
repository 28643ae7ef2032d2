"""Exceptions shared across modules."""


class BudgetExhausted(RuntimeError):
    """A search ran out of budget before it could certify an answer."""


class PresentationNotNormalized(ValueError):
    """A construction needs a presentation with no long invertible subword inside a piece."""


class UnitsSpecError(ValueError):
    """Malformed or inconsistent group-of-units specification."""
