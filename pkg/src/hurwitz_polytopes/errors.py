"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's precondition."""


class InconsistencyError(RuntimeError):
    """Raised when the exact and numeric stability tests disagree beyond the band."""
