"""Exception hierarchy shared by all modules."""


class ReliabilityError(Exception):
    """Base class for errors raised by survmap."""


class InvalidInputError(ReliabilityError, ValueError):
    """An argument is outside the domain of the operation."""


class InfeasibleError(ReliabilityError):
    """A requirement or parameter combination cannot be realised by the per-cycle chain."""


class NumericalError(ReliabilityError, ArithmeticError):
    """A numerical routine failed where it should not have (indicates a bug)."""
