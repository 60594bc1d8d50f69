"""Exception types shared across the package."""


class NcGraphError(Exception):
    """Base class for package errors."""


class CapExceeded(NcGraphError):
    """A computation would exceed a configured desk-scale limit."""


class PreconditionError(NcGraphError, ValueError):
    """An operation was called with arguments violating its hypotheses."""


class DescriptorError(PreconditionError):
    """A group descriptor or generator file could not be parsed."""


class UnsupportedFamily(PreconditionError):
    """A group family or parameter set that no constructor handles."""
