"""Exception types shared across the package."""


class IncrTreeError(Exception):
    """Base class for all errors raised by incrtree."""


class RefinementLimitExceeded(IncrTreeError):
    """A lazy comparison needed more bits than the configured cap."""


class DomainError(IncrTreeError, ValueError):
    """Parameters outside the mathematical domain of an operation."""


class UnsupportedFamily(DomainError):
    """Family weights fall in the unsupported ``-a*gamma**2`` case."""


class AmbiguousOrder(IncrTreeError):
    """Two enclosing intervals overlap, so the rank order is undecided."""


class SizeTooLarge(IncrTreeError, ValueError):
    """Requested size is above an enumeration cutoff."""


class EvenSize(IncrTreeError, ValueError):
    """Strict binary trees only exist for odd sizes."""


class InvalidExpectation(IncrTreeError, ValueError):
    """Expected probabilities or counts are not usable for a test."""
