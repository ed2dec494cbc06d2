"""Exception types shared across the package."""


class MulticatError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(MulticatError):
    """A table or definition is malformed (missing cell, bad reference)."""


class CompositionError(MulticatError):
    """Signatures are incompatible for the requested composition."""


class SubstitutionError(MulticatError):
    """Tree substitution with mismatched valence or arity."""


class TruncationError(MulticatError):
    """A construction escaped its declared caps."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BudgetExceededError(MulticatError):
    """An enumeration exceeded its candidate budget."""

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class DomainError(MulticatError):
    """An object map refers to colors outside its stated domain."""


class PartialInputError(MulticatError):
    """An operation that requires a complete table was given a partial one."""
