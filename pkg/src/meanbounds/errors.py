"""Exception hierarchy shared by all modules."""


class MeanBoundsError(Exception):
    """Base class for library errors."""


class DomainError(MeanBoundsError, ValueError):
    """Input outside the domain where the quantity is defined."""


class NonFiniteError(MeanBoundsError, ArithmeticError):
    """Evaluation produced inf or nan."""


class NoConvergence(MeanBoundsError, RuntimeError):
    """An iteration exhausted its budget without meeting the tolerance."""


class LengthMismatch(MeanBoundsError, ValueError):
    pass


class AdmissibilityError(MeanBoundsError, ValueError):
    """Lorentz-space deficiency is negative."""


class ZeroVectorError(MeanBoundsError, ValueError):
    pass


class QuadratureFailure(MeanBoundsError, RuntimeError):
    """Adaptive quadrature ran out of nodes before reaching tolerance."""


class DivergentSeries(MeanBoundsError, ArithmeticError):
    pass


class ParseError(MeanBoundsError, ValueError):
    """Syntax error in an expression or a mean string.

    ``offset`` is the byte offset of the offending token and ``expected``
    the set of tokens that would have been accepted there.
    """

    def __init__(self, message, offset=0, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class EvalError(MeanBoundsError, ValueError):
    """Domain violation while evaluating an expression tree."""

    def __init__(self, message, node=None, x=None):
        self.node = node
        self.x = x
        super().__init__(message)
