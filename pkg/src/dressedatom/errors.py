"""Exception types shared across the package."""


class DressedAtomError(Exception):
    """Base class for all package errors."""


class ValidationError(DressedAtomError):
    """A configuration value violates a declared invariant."""


class ParseError(DressedAtomError):
    """A config document could not be parsed; carries key context."""


class DegenerateFrameError(DressedAtomError):
    """The mixing angle is undefined (zero matrix up to tolerance)."""


class IndeterminateAtZeroCoupling(DressedAtomError):
    """The connection prefactor is 0/0 and the limit could not be resolved."""


class DomainError(DressedAtomError):
    """Argument outside the mathematical domain of a special function."""


class QuadratureFailure(DressedAtomError):
    """Adaptive quadrature could not reach the requested tolerance."""


class RegimeMismatch(DressedAtomError):
    """Asymptotic form requested outside its validity window."""


class StepTooLarge(DressedAtomError):
    """Integrator step exceeds the enforced resolution bound."""


class GridMismatch(DressedAtomError):
    """Two time series do not share an identical time grid."""


class InsufficientSpan(DressedAtomError):
    """A propagation does not cover enough oscillation periods."""


class UnknownAxis(DressedAtomError):
    """Sweep axis does not name a numeric config field."""
