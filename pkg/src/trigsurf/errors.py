"""Exception hierarchy shared by all trigsurf modules."""


class TrigsurfError(Exception):
    """Base class for every error raised by this package."""


# curves and branches
class InvalidCurve(TrigsurfError, ValueError):
    pass


class DuplicateRoots(InvalidCurve):
    pass


class CurveNotSymmetric(TrigsurfError):
    pass


class WrongCurve(TrigsurfError):
    pass


class AtBranchPoint(TrigsurfError):
    pass


class BranchPointOnInterior(TrigsurfError):
    pass


class SeedInconsistent(TrigsurfError, ValueError):
    pass


class OpenCycle(TrigsurfError):
    """Cycle segments do not chain into a closed loop."""


class PathSheetMismatch(TrigsurfError):
    """A polyline vertex carries a w-value off the continued sheet."""


# quadrature
class PrecisionNotReached(TrigsurfError):
    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


# lattice arithmetic
class DimensionMismatch(TrigsurfError, ValueError):
    pass


class NotCoprime(TrigsurfError, ValueError):
    pass


class DegenerateAngle(TrigsurfError, ValueError):
    pass


class SingularBasis(TrigsurfError, ValueError):
    pass


# moduli
class RangeViolation(TrigsurfError, ValueError):
    pass


# configuration
class ConfigError(TrigsurfError, ValueError):
    pass
