"""Exception types shared across the package."""


class NestedShellsError(Exception):
    """Base class for all errors raised by this package."""


class NotInImage(NestedShellsError, ValueError):
    """A permutation of 12 points does not respect the pairing (k, k+6)."""


class NotSubgroup(NestedShellsError, ValueError):
    pass


class NotCoprime(NestedShellsError, ValueError):
    pass


class CatalogMismatch(NestedShellsError):
    """Subgroup discovery and the hardcoded generator lists disagree."""


class VerificationError(NestedShellsError):
    pass


class ParseError(NestedShellsError, ValueError):
    pass


class EmptyModel(NestedShellsError):
    pass


class NoSurface(NestedShellsError):
    pass
