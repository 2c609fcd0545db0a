"""Exception hierarchy shared by all summa modules."""


class SummaError(Exception):
    """Base class for every error raised by summa."""


class ConfigurationError(SummaError, ValueError):
    """Invalid inputs, missing representations or unknown names."""


class UnsupportedMethodError(ConfigurationError):
    """A summation method was requested where it is not defined."""


class DomainError(SummaError, ArithmeticError):
    """A mean or diagnostic is undefined for the supplied values.

    ``index`` names the offending position when one exists.
    """

    def __init__(self, message, index=None, method=None):
        super().__init__(message)
        self.index = index
        self.method = method


class EvaluationError(DomainError):
    """A signal evaluator returned a non-finite value at a quadrature node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node
