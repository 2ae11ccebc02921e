"""Shared exception types."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NumericalError(ArithmeticError):
    """A numerical routine failed to meet its accuracy or finiteness contract."""


class FormatError(ValueError):
    """A binary or JSON artifact does not match its documented layout."""
