"""Exception hierarchy shared by every module."""


class CFError(Exception):
    """Base class for all errors raised by complexcf."""


class AmbiguousTie(CFError):
    """An enclosure cannot separate candidate lattice points."""


class AmbiguousBoundary(CFError):
    """A distance sits too close to a threshold to decide."""


class PrecisionCapExceeded(CFError):
    """Refinement hit the configured precision cap."""


class ReducibleOverK(CFError, ValueError):
    """The quadratic factors over the quotient field."""


class AmbiguousSelector(CFError, ValueError):
    """A root selector does not pick out exactly one root."""


class PoleAtValue(CFError, ZeroDivisionError):
    """A Moebius map sends the value to infinity."""


class ChooserFailed(CFError):
    """A chooser produced no admissible partial quotient."""


class InvalidExpansion(CFError, ValueError):
    """A partial-quotient sequence is not a valid expansion."""


class NotAZero(CFError, ValueError):
    """The expansion's base point does not annihilate the form."""


class DegenerateForm(CFError, ValueError):
    """The zero matrix was supplied where a form is required."""


class SearchExhausted(CFError):
    """A bounded search ran out of candidates."""


class PointInK(CFError, ValueError):
    """A constructed point lies in the quotient field."""
