"""Exception types raised by rgraeffe."""


class GraeffeError(Exception):
    """Base class for all rgraeffe errors."""


class IndexMismatchError(GraeffeError, ValueError):
    """Binary renormalized operation on operands with different indices."""


class TieError(GraeffeError, ArithmeticError):
    """The limit sum is undefined because both operands have equal magnitude."""


class RenRangeError(GraeffeError, OverflowError):
    """A renormalized value cannot be mapped back to a float complex number."""


class DegenerateInputError(GraeffeError, ValueError):
    """Zero leading coefficient, constant polynomial, or similar."""


class ParameterError(GraeffeError, ValueError):
    """An argument violates a documented precondition."""
