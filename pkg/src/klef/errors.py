"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: PreconditionError (and its subclasses)
to 3, IntegrityError to 4, anything argument-shaped to 2.
"""

from __future__ import annotations


class KlefError(Exception):
    """Base class for all package errors."""


class PreconditionError(KlefError):
    """An operation was called outside its documented domain."""


class ResourceLimitError(PreconditionError):
    """A configured cap (word length, interval size, budget) was exceeded."""


class IntegrityError(KlefError):
    """An internal consistency assertion failed.

    Raised when the pipeline contradicts itself: an exact division that a
    structure theorem guarantees fails, a duality pairing leaves the base
    ring, a decomposition does not reproduce its Hecke character. These are
    never user errors.
    """


class NotDivisible(KlefError):
    """Exact polynomial division failed; the quotient does not exist."""


class NotInSpan(KlefError):
    """A vector is not in the module span of the given rows."""


class SingularMatrixError(KlefError):
    """A matrix required to be nonsingular has zero determinant."""
