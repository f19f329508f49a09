"""Exception types raised across the package."""


class KnotFloerError(Exception):
    """Base class for all errors raised by knotfloer."""


class DifferentialNotSquareZero(KnotFloerError):
    pass


class ParseError(KnotFloerError):
    pass


class ValidationError(KnotFloerError):
    """Raised when a diagram violates one of the structural invariants.

    ``violations`` holds the list of :class:`~knotfloer.diagram.Violation`
    records; ``reasons`` is the list of their reason codes.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        self.reasons = [v.reason for v in self.violations]
        super().__init__("; ".join(str(v) for v in self.violations))


class UnknownDiagram(KnotFloerError, KeyError):
    pass


class WindowTooSmall(KnotFloerError):
    pass


class StabilizationLimitExceeded(KnotFloerError):
    pass


class NonIntegralMaslov(KnotFloerError):
    pass


class SignAssignmentFailed(KnotFloerError):
    pass


class NormalizationAmbiguous(KnotFloerError):
    pass


class AsymmetricEuler(KnotFloerError):
    pass


class TruncationUnstable(KnotFloerError):
    pass


class NotAKnotPolynomial(KnotFloerError):
    pass


class GammaNotInHandle(KnotFloerError):
    pass
