"""Exception types shared across the package."""


class ConfballError(Exception):
    """Base class for all package errors."""


class DomainError(ConfballError):
    """A point left the radial domain of the conformal factor."""


class AxisError(ConfballError):
    """A profile quantity was requested at or below the rotation axis (x <= 0)."""


class SigmaSignError(ConfballError):
    """An operation requiring sigma > 0 was evaluated where sigma <= 0."""


class ToleranceError(ConfballError):
    """The integrator could not meet the requested local error tolerance."""


class NoRootError(ConfballError):
    """A bracketing search found no sign change."""


class PreconditionError(ConfballError):
    """An operation was called outside its stated range of validity."""
