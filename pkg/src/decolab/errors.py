"""Exception hierarchy shared by all modules."""


class DecolabError(Exception):
    """Base class for library errors."""


class ValidationError(DecolabError, ValueError):
    """Input violates a documented invariant or precondition."""


class DimensionError(ValidationError):
    pass


class NotHermitianError(ValidationError):
    pass


class InvalidStateError(ValidationError):
    pass


class IndexRangeError(ValidationError, IndexError):
    pass


class GridError(ValidationError):
    """Grid too small, or a state reaching the box edge."""


class StabilityError(ValidationError):
    """Time step above the enforced stability bound."""


class SingularPlanError(ValidationError):
    """Tomography observables do not span operator space."""


class NumericalGuardError(DecolabError, RuntimeError):
    """A runtime guard (positivity, truncation, trace drift) tripped.

    ``invariant`` names the violated condition so callers can report it.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant
