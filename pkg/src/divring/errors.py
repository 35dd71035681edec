"""Exception classes shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range user input."""


class ResourceExceeded(RuntimeError):
    """A configured ceiling (cosets, degree, enumeration depth) was hit."""

    def __init__(self, message: str, ceiling: str = "", limit=None):
        super().__init__(message)
        self.ceiling = ceiling
        self.limit = limit
