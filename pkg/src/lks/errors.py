class LksError(ValueError):
    """Base class for every error raised by the lks package."""


class CapExceededError(LksError):
    """An enumeration or search was asked to go beyond its configured cap."""


class PreconditionError(LksError):
    """An operation was called with inputs outside its documented domain."""


class HypothesisNotMetError(PreconditionError):
    """Fewer than n/2 host vertices have degree at least k."""


class FormatError(LksError):
    """Malformed graph6 string, tree file or shape literal."""


class InvalidPivotError(LksError):
    """A path rotation was requested with a pivot that is not a chord to the path end."""


class CapacityError(LksError):
    """Greedy leaf completion ran out of free host neighbours.

    Under the completion preconditions this cannot happen, so hitting it means an
    upstream strategy produced an inconsistent partial embedding.
    """
