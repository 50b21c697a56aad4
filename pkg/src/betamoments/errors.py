"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class SupportError(DomainError):
    """The evaluation point is not strictly inside the spectral support."""


class ConvergenceError(ArithmeticError):
    """A quadrature, eigen-solver or refinement loop failed to converge."""


class ConditioningError(ConvergenceError):
    """A determinant evaluation lost too many digits to be trusted."""
