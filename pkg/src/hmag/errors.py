"""Exception hierarchy shared across the package."""


class HmagError(Exception):
    """Base class for every error raised by hmag."""


class InputError(HmagError, ValueError):
    """Invalid metric-space or graph input."""


class ParseError(InputError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class NonzeroSelfDistance(InputError):
    pass


class NegativeDistance(InputError):
    pass


class InfiniteDistance(InputError):
    pass


class TriangleViolation(InputError):
    """``d(x, z) > d(x, y) + d(y, z)``; ``triple`` holds the witnessing labels."""

    def __init__(self, message, triple):
        self.triple = triple
        super().__init__(message)


class DisconnectedGraph(InputError):
    pass


class SamePoint(InputError):
    pass


class NotSkeletal(InputError):
    pass


class ZeroConstantDenominator(HmagError, ArithmeticError):
    pass


class SingularEvaluation(HmagError, ArithmeticError):
    pass


class SingularZeta(HmagError, ArithmeticError):
    pass


class BudgetExceeded(HmagError, RuntimeError):
    pass


class MissingBasis(HmagError, KeyError):
    pass


class IncompleteComplex(HmagError, ValueError):
    pass
