"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`CremonaError`.
The CLI maps :class:`MapSyntaxError` and :class:`UsageError` to exit code 2 and
every other :class:`CremonaError` to exit code 1.
"""


class CremonaError(Exception):
    """Base class for all library errors."""


class UsageError(CremonaError):
    pass


# exact fields
class SpecMismatch(CremonaError, TypeError):
    pass


class DivisionByZero(CremonaError, ZeroDivisionError):
    pass


class ZeroElement(CremonaError, ValueError):
    pass


class UnsupportedElement(CremonaError, ValueError):
    pass


class FieldTooSmall(CremonaError, ValueError):
    pass


class RootNotInField(CremonaError, ValueError):
    """A root needed by a construction does not exist in the declared field."""

    def __init__(self, message, needed_degree=None):
        super().__init__(message)
        self.needed_degree = needed_degree


# polynomials, series
class UnsupportedCharacteristic(CremonaError, ValueError):
    pass


class Undecided(CremonaError):
    pass


class NonUnitConstantTerm(CremonaError, ValueError):
    pass


class DegreeBudgetExceeded(CremonaError):
    pass


# parser
class MapSyntaxError(CremonaError, ValueError):
    """Parse failure; ``position`` is a byte offset into the input."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


class NotJonquieres(MapSyntaxError):
    pass


class NotHomogeneous(MapSyntaxError):
    pass


class InconsistentDegrees(MapSyntaxError):
    pass


# Jonquieres group and centralizer machinery
class NotFiberwise(CremonaError, ValueError):
    pass


class NotElliptic(CremonaError):
    pass


class NotBaseWandering(CremonaError):
    pass


class RankZeroFiber(CremonaError):
    pass


class UnresolvedFixedPoints(CremonaError):
    def __init__(self, message, quadratic=None):
        super().__init__(message)
        self.quadratic = quadratic


class Char2NonSplit(CremonaError):
    pass


class CharPUnsupported(CremonaError):
    pass


class NotSplittable(CremonaError):
    pass


class NotInvolutionForm(CremonaError):
    pass


class NotRecognized(CremonaError):
    pass


class ChartMismatch(CremonaError):
    pass


class DegenerateStep(CremonaError):
    pass


class PreconditionError(CremonaError, ValueError):
    pass


class NotCommuting(CremonaError):
    pass


class NotFreeRankTwo(CremonaError):
    pass


class SequenceTooShort(CremonaError, ValueError):
    pass
