"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad user input: malformed files, out-of-range parameters."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed; indicates a bug, never bad input."""
