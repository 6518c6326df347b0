"""Exception types shared across the package."""


class ContractError(ValueError):
    """An input violates a structural precondition (shape, symmetry)."""


class DomainError(ValueError):
    """A parameter lies outside the range where a formula is defined."""


class UnphysicalStateError(ValueError):
    """A covariance matrix violates the uncertainty relation."""

    def __init__(self, message, nu_minus=None):
        super().__init__(message)
        self.nu_minus = nu_minus


class NumericalDegeneracyError(ArithmeticError):
    """A numerical reduction has no solution within tolerance."""


class InternalConsistencyError(ArithmeticError):
    """A computed quantity violates a mathematical guarantee beyond rounding."""
