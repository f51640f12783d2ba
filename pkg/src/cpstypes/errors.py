"""Exception hierarchy.

Every error raised by the library derives from :class:`CpsError`, so callers
(and the CLI) can separate input problems from bugs with a single ``except``.
Semantic failures (axiom violations, non-commuting morphisms) are *not*
exceptions; they are returned in reports.
"""


class CpsError(ValueError):
    """Base class for all library errors."""


class DuplicateLabel(CpsError):
    pass


class EmptyConditioningEvent(CpsError):
    pass


class UnknownState(CpsError):
    pass


class EventOutsideSpace(CpsError):
    pass


class InconsistentLiteralSet(CpsError):
    pass


class UnknownProposition(CpsError):
    pass


class NotAProductDomain(CpsError):
    pass


class BadComponent(CpsError):
    pass


class PartialMap(CpsError):
    pass


class NatureCoordinateMoved(CpsError):
    pass


class ConditioningMismatch(CpsError):
    pass


class MissingEvent(CpsError):
    pass


class ExtraEvent(CpsError):
    pass


class SpaceMismatch(CpsError):
    pass


class UnknownPlayer(CpsError):
    pass


class UnknownEvent(CpsError):
    pass


class UnknownType(CpsError):
    pass


class ProbabilityOutOfRange(CpsError):
    pass


class NegativeDepth(CpsError):
    pass


class DepthExceeded(CpsError):
    pass


class MorphismInvalid(CpsError):
    pass


class WellDefinednessFailure(CpsError):
    """Raised when quotient block beliefs depend on the representative.

    Never expected on valid input; it signals a bug in the refinement.
    """


class ThresholdOutOfRange(CpsError):
    pass


class ParseError(CpsError):
    """Formula syntax error.

    ``offset`` is a byte offset into the UTF-8 encoded input and ``expected``
    the sorted set of token descriptions that would have been accepted there.
    """

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at byte {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
