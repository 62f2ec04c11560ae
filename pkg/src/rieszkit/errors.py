"""Exception hierarchy.

Each class carries the process exit code the CLI maps it to.
"""


class RieszkitError(Exception):
    exit_code = 3


class ValidationError(RieszkitError, ValueError):
    """Bad parameters, detected before any numerics run."""

    exit_code = 2


class DimensionError(ValidationError):
    pass


class RegimeError(ValidationError):
    pass


class InvalidFamilyError(ValidationError):
    pass


class MissingRootError(ValidationError):
    pass


class NumericalError(RieszkitError, ArithmeticError):
    exit_code = 3


class ExponentRangeError(NumericalError, OverflowError):
    pass


class PoleProximityError(NumericalError):
    pass


class SingularBlockError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class TruncationError(NumericalError):
    pass
