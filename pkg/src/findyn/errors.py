"""Exception hierarchy shared by every analysis module."""


class DynamicsError(Exception):
    """Base class for all errors raised by findyn."""


class InputFormatError(DynamicsError, ValueError):
    """A table, map or file does not have the expected shape."""


class ParameterError(DynamicsError, ValueError):
    """A numeric parameter is outside its admissible range."""


class InvarianceError(DynamicsError, ValueError):
    """A subset that must be invariant under the map is not."""


class CapabilityError(DynamicsError):
    """The requested analysis is only defined for bijective systems."""


class PreconditionError(DynamicsError, ValueError):
    """An operation was called with inputs violating its precondition."""


class ResourceError(DynamicsError):
    """An enumeration or search exceeded its configured budget."""
