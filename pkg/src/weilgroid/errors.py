"""Exception types shared across the package."""


class WeilgroidError(Exception):
    """Base class for all errors raised by this package."""


class MixedSpace(WeilgroidError):
    """Operands live over different simplicial spaces."""


class NonNilpotentComponent(WeilgroidError):
    """A morphism component does not square to zero."""


class PatternViolation(WeilgroidError):
    """A codomain relation fails under the candidate components."""


class NonzeroConstant(WeilgroidError):
    """A morphism component has a nonzero constant term."""


class DomainMismatch(WeilgroidError):
    """Attempted to compose morphisms whose middle spaces differ."""


class SpaceMismatch(WeilgroidError):
    """An element's space does not match what the operation expects."""


class BaseIncompatible(WeilgroidError):
    """Base points or anchor paths do not line up."""


class WrongModel(WeilgroidError):
    """The operation is only defined for a different model kind."""


class Incompatible(WeilgroidError):
    """No solution: the given values violate the diagram's compatibility conditions."""


class NotPerceivedLimit(WeilgroidError):
    """The diagram has a nontrivial kernel in this model, so solutions are not unique."""


class BadSlot(WeilgroidError):
    """Slot index out of range."""


class NotInKernel(WeilgroidError):
    """The bracket needs anchor-killed arguments."""


class DimensionMismatch(WeilgroidError):
    """Wrong number of coordinates for the configured base dimension."""


class DegreeOverflow(WeilgroidError):
    """A section operation exceeded the configured polynomial degree cap."""


class ConfigInvalid(WeilgroidError):
    """A CLI or suite configuration file failed validation."""
