"""Exception types raised across the package."""


class SimAlgebraError(ValueError):
    """Base class for every error raised by simalgebra."""


class IntervalError(SimAlgebraError):
    """Malformed interval: degenerate, reversed, or a closed infinite bound."""


class KindMismatchError(SimAlgebraError):
    """A measure kind is paired with an incompatible codomain or operator side."""


class DomainMismatchError(SimAlgebraError):
    """Two objects are wired together over incompatible intervals."""


class DirectionError(SimAlgebraError):
    """A map has the wrong monotone direction for the requested construction."""


class TransformationError(SimAlgebraError):
    """A scalar map fails its bijection, monotonicity or inverse checks."""


class UnknownNameError(SimAlgebraError):
    """A builtin, catalog entry or spec string does not name anything known."""


class SampleTooLargeError(SimAlgebraError):
    """An exhaustive sweep would exceed its configured size cap."""


class SpecParseError(SimAlgebraError):
    """A textual spec (domain, operator, map, tree) could not be parsed."""
