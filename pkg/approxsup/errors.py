"""Error types raised by approxsup.

All errors derive from :class:`ApproxSupError`. Errors signalling invalid
input also derive from :class:`ValueError`. Errors signalling that a
hypothesis needed by a certificate does not hold derive from
:class:`HypothesisError`.

"""


class ApproxSupError(Exception):
    """Base class of all approxsup errors."""


class HypothesisError(ApproxSupError):
    """A hypothesis required to emit a certificate is violated."""


class InequalityError(HypothesisError):
    """A numeric inequality required by a certificate is violated.

    Parameters
    ----------
    inequality : str
        Human readable form of the inequality that should hold, i.e.,
        ``lhs <op> rhs``.
    lhs, rhs : float
        The two sides of the inequality as computed.

    """

    def __init__(self, inequality, lhs, rhs, message=None):
        self.inequality = inequality
        self.lhs = float(lhs)
        self.rhs = float(rhs)
        if message is None:
            message = f"{inequality} violated (lhs={self.lhs!r}, rhs={self.rhs!r})"
        super().__init__(message)


class DomainError(ApproxSupError, ValueError):
    """Evaluation point or interval outside the admissible domain."""


class DimensionError(ApproxSupError, ValueError):
    """Number of points does not match the number of exponent triples."""


class DegenerateError(HypothesisError, ValueError):
    """Evaluation functions are numerically dependent."""


class SingularError(ApproxSupError, ValueError):
    """Matrix is singular at working precision."""


class RegimeError(HypothesisError, ValueError):
    """Terms do not belong to the requested regime."""


class DeltaError(InequalityError):
    """A perturbation unit is too far from 1."""


class WindowError(InequalityError):
    """A window or smallness inequality of a certificate fails."""


class AsymmetryError(ApproxSupError, ArithmeticError):
    """A quantity expected to be real has a significant imaginary part."""


class GridError(ApproxSupError, ValueError):
    """Evaluation grid too coarse."""


class FormError(HypothesisError, ValueError):
    """Prepared sum is not in the form required by the main estimate."""


class NegativeError(ApproxSupError, ValueError):
    """A value expected to be nonnegative is negative."""


class EmptyError(ApproxSupError, ValueError):
    """Empty input where at least one item is required."""


class DataError(ApproxSupError, ValueError):
    """Sample data cannot support the requested fit."""


class HorizonError(ApproxSupError):
    """Tail envelope could not be made small within the allowed horizons."""


class OscError(HypothesisError, ValueError):
    """Operation requires a real exponent field (all alpha equal to 0)."""


class SumFileError(ApproxSupError, ValueError):
    """Malformed sum file.

    Parameters
    ----------
    message : str
        Description of the problem.
    lineno : int, optional
        1-based line number where the problem was found.

    """

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
