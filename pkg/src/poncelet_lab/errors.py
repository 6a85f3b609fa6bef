"""Exception hierarchy shared by all modules."""


class PonceletError(Exception):
    """Base class for every error raised by poncelet_lab."""


# geometry
class InvalidPencil(PonceletError, ValueError):
    pass


class DegenerateMember(PonceletError, ValueError):
    pass


class DegenerateConic(PonceletError, ValueError):
    pass


class NoIntersection(PonceletError, ValueError):
    pass


class PointNotOnObjects(PonceletError, ValueError):
    pass


class NotCollinear(PonceletError, ValueError):
    pass


# cayley engine
class NonUnitConstantTerm(PonceletError, ValueError):
    pass


class OrderTooLow(PonceletError, ValueError):
    pass


class KTooSmall(PonceletError, ValueError):
    pass


# dynamics
class StepError(PonceletError, RuntimeError):
    """A Poncelet step could not be taken.

    ``index`` is the step number at which the trajectory failed (``None`` for a
    standalone step).
    """

    def __init__(self, message, index=None):
        super().__init__(message if index is None else f"step {index}: {message}")
        self.index = index


class NoRealTangent(StepError):
    pass


class TangentMissesCircle(StepError):
    pass


# classifier
class FociNotInside(PonceletError, ValueError):
    pass


class BranchNotApplicable(PonceletError, ValueError):
    pass


class NoRealIntersection(PonceletError, ValueError):
    pass


# blaschke
class ExcludedConfiguration(PonceletError, ValueError):
    pass


class NotDecomposable(PonceletError, ValueError):
    pass


class FrameMismatch(PonceletError, RuntimeError):
    pass


# painleve
class SingularLocus(PonceletError, ValueError):
    pass


class SingularParameter(PonceletError, ValueError):
    pass


class OkamotoPole(PonceletError, ZeroDivisionError):
    pass


class VerificationFailure(PonceletError, AssertionError):
    """A theorem-level check failed on a concrete instance."""
