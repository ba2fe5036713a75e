"""Exception types shared across modules."""


class VerificationError(RuntimeError):
    """A bounded-degree oracle disagreed with a constructed result."""
