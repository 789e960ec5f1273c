"""Exception hierarchy shared by every kumcount module."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidProfileError(DomainError):
    """The divisibility t does not divide gcd(2d, 2n+2)."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
