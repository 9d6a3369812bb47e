"""Exception hierarchy.

Every error raised on purpose by the library derives from ``ThetaError`` so
callers (the CLI in particular) can map them onto exit codes.
"""


class ThetaError(Exception):
    """Base class for library errors."""


class InvalidInput(ThetaError, ValueError):
    """Input data violates a structural invariant (exit code 3 in the CLI)."""


class ZeroInversion(ThetaError, ZeroDivisionError):
    pass


class IncompatibleOrder(InvalidInput):
    pass


class InfiniteGroup(InvalidInput):
    pass


class ParentMismatch(InvalidInput):
    pass


class NotAlternating(InvalidInput):
    pass


class DegenerateInput(InvalidInput):
    pass


class InternalInvariantViolation(ThetaError, AssertionError):
    """A computed object failed a consistency check; indicates a bug."""


class NotWeightOne(InvalidInput):
    pass


class NotARepresentation(InvalidInput):
    pass


class RankTooLarge(InvalidInput):
    pass


class NoInvariantForm(InvalidInput):
    pass


class NonUniqueInvariantForm(InvalidInput):
    pass


class FormDegenerateOnBlock(InvalidInput):
    pass


class NoIsotropicSplitting(InvalidInput):
    pass


class DomainError(InvalidInput):
    pass
