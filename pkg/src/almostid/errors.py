"""Error types shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(ArithmeticError):
    """An iterative computation failed to meet its documented contract."""
