"""Exception types shared across the package."""


class ParseError(ValueError):
    """Input text or JSON cannot be read as exact data."""


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


class PreconditionError(ValueError):
    """An operation was called outside its mathematical hypotheses."""


class InconclusiveError(RuntimeError):
    """A bounded search ended without finding the object it was looking for."""
