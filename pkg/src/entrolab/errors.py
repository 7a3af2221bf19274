"""Exception hierarchy shared by every entrolab module."""


class EntrolabError(Exception):
    """Base class for all errors raised by entrolab."""


class ValidationError(EntrolabError, ValueError):
    """An input object violates one of its defining invariants.

    Parameters
    ----------
    invariant : str
        Short name of the violated invariant, e.g. ``"hermitian"``.
    magnitude : float
        How far outside the tolerance the input lies.
    """

    def __init__(self, message, invariant=None, magnitude=None):
        super().__init__(message)
        self.invariant = invariant
        self.magnitude = magnitude


class DimensionError(EntrolabError, ValueError):
    """Shapes or subsystem dimensions of the operands are incompatible."""
