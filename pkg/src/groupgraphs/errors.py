"""Exception types shared by all groupgraphs modules."""


class GroupError(Exception):
    """Base class for all groupgraphs errors."""


class DegreeMismatch(GroupError):
    """A permutation does not act on the expected number of points."""


class BudgetExceeded(GroupError):
    """An enumeration grew past its element or work budget."""


class NotAMember(GroupError):
    """An element is not contained in the group it was used with."""


class NotNormal(GroupError):
    """A quotient was requested by a non-normal subgroup."""


class PrimeNotDividing(GroupError):
    """A prime-indexed computation was requested for a prime not dividing the order."""


class ThresholdExceeded(GroupError):
    """A lattice-based computation was requested above its configured size threshold."""


class NotSolubleAndTooLarge(GroupError):
    """Hall subgroup search requires a soluble group or a group below the lattice threshold."""


class NotFound(GroupError):
    """An exhaustive search finished without finding the requested subgroup."""


class InvalidSpec(GroupError):
    """A group specification has invalid kind or parameters."""


class ParseError(GroupError):
    """Group-spec text failed to parse.

    Carries the offset of the failure and a description of what was expected.
    """

    def __init__(self, message, position=None, expected=None):
        self.position = position
        self.expected = expected
        detail = message
        if position is not None:
            detail += f" at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class SelectorUndefined(GroupError):
    """A section selector has no enumerator for a required prime."""
