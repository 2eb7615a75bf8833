"""Exception types raised across the package.

Every error derives from :class:`Sl2Error` so callers can catch the whole
family at once.  Names follow the failure they report.
"""


class Sl2Error(ValueError):
    """Base class for all package errors."""


class NotUnimodular(Sl2Error):
    """A matrix handed to :class:`~sl2reps.mat2.Mat2` has det far from 1."""


class AmbiguousClass(Sl2Error):
    """|tr| sits inside the guard band around 2 but the matrix is not parabolic."""


class EllipticHasNoEulerLift(Sl2Error):
    pass


class NonIntegerWinding(Sl2Error):
    pass


class NotCentral(Sl2Error):
    pass


class CentralBoundary(Sl2Error):
    pass


class NotARepresentation(Sl2Error):
    pass


class EllipticBoundary(Sl2Error):
    pass


class IntegralityViolation(Sl2Error):
    pass


class InfeasibleSigma(Sl2Error):
    pass


class InfeasibleBranch(Sl2Error):
    pass


class CentralCommutator(Sl2Error):
    pass


class SumNotMultipleOf2Pi(Sl2Error):
    pass


class NotRealizable(Sl2Error):
    pass


class BudgetExhausted(Sl2Error):
    pass


class CentralCut(Sl2Error):
    pass


class PreconditionViolated(Sl2Error):
    pass


class OutOfDomain(Sl2Error):
    pass


class TooLarge(Sl2Error):
    pass


class SamplerBudget(Sl2Error):
    pass


class RankAmbiguous(Sl2Error):
    pass


class DegenerateForm(Sl2Error):
    pass
