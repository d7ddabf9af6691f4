"""Exception hierarchy shared by every module."""


class PhaseSvdError(Exception):
    """Base class for all errors raised by phasesvd."""


class DimensionError(PhaseSvdError, ValueError):
    """Operand shapes are incompatible."""


class NonFiniteError(PhaseSvdError, ValueError):
    """A NaN or infinite entry reached a public operation."""


class NotHermitianError(PhaseSvdError, ValueError):
    pass


class NumericalError(PhaseSvdError, ArithmeticError):
    """Base for failures of the numerical pipeline (CLI exit code 3)."""


class ConvergenceError(NumericalError):
    pass


class PhaseSolveError(NumericalError):
    """U0/V0 could not be paired into a consistent reconstruction."""


class ConventionError(PhaseSvdError, ValueError):
    pass


class ParseError(PhaseSvdError, ValueError):
    """Malformed matrix/state text. Carries the line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
