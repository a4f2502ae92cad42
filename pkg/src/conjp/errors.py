"""Exception and warning classes shared across the package."""


class ConjpError(Exception):
    """Base class for all errors raised by conjp."""


# geometry
class DomainError(ConjpError, ValueError):
    pass


class OverlappingCircles(DomainError):
    pass


class HoleOutsideOuter(DomainError):
    pass


class TooFewBoundaryComponents(DomainError):
    pass


class NTooSmall(ConjpError, ValueError):
    pass


class GridMismatch(ConjpError, ValueError):
    pass


# expressions
class ExprSyntaxError(ConjpError, ValueError):
    """Malformed expression text. ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    pass


class PoleAtEvaluationPoint(ConjpError, ZeroDivisionError):
    def __init__(self, point, subexpr):
        super().__init__(f"pole of {subexpr!s} at z={point!r}")
        self.point = point
        self.subexpr = subexpr


# harmonic
class IllConditioned(ConjpError, ArithmeticError):
    pass


class PointNotInterior(ConjpError, ValueError):
    pass


class NonRealPairing(ConjpError, ArithmeticError):
    pass


class ResidualTooLarge(UserWarning):
    """Dirichlet fit residual above tolerance; downstream verdicts carry it."""


# extendibility
class ProbeTooCloseToBoundary(UserWarning):
    pass


class UnderResolved(UserWarning):
    """Base point so close to the boundary that the grid cannot resolve the kernel."""


class NotCertifiedExtendible(ConjpError):
    pass


class AllFieldsTinyAtPoint(ConjpError, ArithmeticError):
    pass


# kernels
class SolveFailed(ConjpError, ArithmeticError):
    pass


class WrongZeroCount(ConjpError):
    def __init__(self, found, expected):
        super().__init__(f"found {found} zeros, expected {expected}")
        self.found = found
        self.expected = expected


class ZeroNearBoundary(ConjpError):
    pass


class ResidueCheckFailed(ConjpError, ArithmeticError):
    pass


class CommonZeroFound(ConjpError, ArithmeticError):
    pass


# oracles
class TruncationInsufficient(ConjpError, ArithmeticError):
    pass


# cli
class ConfigError(ConjpError, ValueError):
    pass
