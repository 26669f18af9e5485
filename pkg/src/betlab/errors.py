"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates the mathematical domain of an operation."""


class NoPositiveRoot(DomainError):
    """No positive-growth root exists (the bet has no positive edge)."""


class InfeasibleThreshold(DomainError):
    """A loss threshold <= 0 makes every betting fraction infeasible."""


class BudgetError(DomainError):
    """The Monte Carlo budget is too small to produce usable estimates."""


class EmptySelection(DomainError):
    """A filter selected no records from a trade series."""


class NoClear(DomainError):
    """Supply exceeds the number of potential buyers; the auction cannot clear."""
