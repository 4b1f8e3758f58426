"""Exception hierarchy shared by all modules."""


class JacobiSeriesError(Exception):
    """Base class for every error raised by this package."""


class InvalidMatrix(JacobiSeriesError, ValueError):
    pass


class DuplicateDiagonal(InvalidMatrix):
    pass


class BadIndex(JacobiSeriesError, IndexError):
    pass


class DegreeMismatch(JacobiSeriesError, ValueError):
    pass


class DimensionMismatch(JacobiSeriesError, ValueError):
    pass


class ZeroConstantTerm(JacobiSeriesError, ZeroDivisionError):
    pass


class NegativeIndex(JacobiSeriesError, ValueError):
    pass


class DenominatorZero(JacobiSeriesError, ZeroDivisionError):
    pass


class LagrangeDivisionByZero(JacobiSeriesError, ZeroDivisionError):
    """A ratio needed to rebuild ``u`` from ``eta`` is undefined."""


class SingularElimination(JacobiSeriesError, ArithmeticError):
    pass


class ConvergenceFailure(JacobiSeriesError, ArithmeticError):
    pass


class BranchAmbiguity(JacobiSeriesError, ValueError):
    pass


class InternalLimit(JacobiSeriesError, ValueError):
    """Requested degree or matrix size exceeds the configured caps."""


class ParseError(JacobiSeriesError, ValueError):
    """Malformed input document or command-line value; the message names the field."""
