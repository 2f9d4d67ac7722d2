"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised when caller-supplied data violates a documented precondition."""


class GuardExceeded(RuntimeError):
    """Raised when a computation would exceed the configured size guard."""

    def __init__(self, message: str, requested: int | None = None, limit: int | None = None):
        super().__init__(message)
        self.requested = requested
        self.limit = limit
