"""Exception hierarchy shared by every module."""


class TopoHellyError(Exception):
    """Base class for all errors raised by topohelly."""


class MalformedInputError(TopoHellyError, ValueError):
    """Input violates a documented precondition."""


class InfeasibleParametersError(MalformedInputError):
    """Generator parameters cannot produce the advertised object."""


class ResourceLimitError(TopoHellyError):
    """An enumeration would exceed a configured cap."""


class InternalConsistencyError(TopoHellyError):
    """An algebraic identity (e.g. boundary of boundary is zero) failed."""


class EmptySpaceError(TopoHellyError):
    """Raised where a non-empty space is required."""


class UnsupportedCoefficientsError(TopoHellyError):
    """Requested coefficient ring is not supported by the operation."""
