"""Exception types shared across the package."""


class ProjcalcError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(ProjcalcError):
    """Two vectors (or a vector and a space) disagree on dimension or space."""


class DegenerateInputError(ProjcalcError):
    """An operation received an input at or below the zero threshold."""


class UnsupportedSetError(ProjcalcError):
    """The requested operation is not defined for this set variant."""


class NotOnBoundaryError(ProjcalcError):
    """A boundary-only operation was called at a non-boundary point."""


class NoDerivativeError(ProjcalcError):
    """No Frechet derivative exists at the queried point."""


class PreconditionError(ProjcalcError):
    """A documented operation precondition was violated."""
