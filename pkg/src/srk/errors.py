"""Exception hierarchy shared by every module of the package."""


class SRKError(Exception):
    """Base class for all domain errors raised by srk."""


class QuaternionZeroDivision(SRKError, ZeroDivisionError):
    pass


class RealPoint(SRKError, ValueError):
    """A sphere-dependent quantity was requested at a real point."""


class OutOfDomain(SRKError, ValueError):
    pass


class ResidualTooLarge(SRKError, ArithmeticError):
    """An exact division left a remainder above tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotReal(SRKError, ArithmeticError):
    pass


class DegreeOverflow(SRKError, OverflowError):
    pass


class NearPole(SRKError, ArithmeticError):
    """Evaluation point lies on (or too close to) an excluded sphere."""

    def __init__(self, message, sphere=None):
        super().__init__(message)
        self.sphere = sphere


class ZeroFunction(SRKError, ValueError):
    pass


class SingularMatrix(SRKError, ValueError):
    pass


class DegenerateDenominator(SRKError, ValueError):
    pass


class DegenerateSymmetrization(SRKError, ArithmeticError):
    pass


class PreconditionFailed(SRKError, ValueError):
    pass


class InconsistentConditions(SRKError, AssertionError):
    """The equivalent rigidity conditions disagreed; this would falsify the theorem."""

    def __init__(self, message, conditions=None):
        super().__init__(message)
        self.conditions = conditions
