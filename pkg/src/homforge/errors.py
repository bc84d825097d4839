"""Exception types shared across the package."""


class HomforgeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidStructureError(HomforgeError):
    """A structure, signature, query, or file violates a format invariant."""


class SignatureMismatchError(HomforgeError):
    """Structures that must share a signature do not."""


class GuardExceededError(HomforgeError):
    """A size guard was hit; carries the would-be cardinality."""

    def __init__(self, message, cardinality):
        super().__init__(message)
        self.cardinality = cardinality


class EnumerationCapError(HomforgeError):
    """More solutions exist than the configured enumeration cap."""


class NotAHomomorphismError(HomforgeError):
    """A map handed to a lift/restrict operation fails validation."""


class UnsafeQueryError(HomforgeError):
    """A synthesized query would have a free variable in no atom."""


class CyclicStructureError(HomforgeError):
    """A digraph expected to be acyclic contains a cycle."""
