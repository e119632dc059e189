"""Exception types shared across the package."""


class QfdiscError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(QfdiscError, ValueError):
    """Raised when inputs violate a documented precondition."""


class WindowTooNarrowError(ValidationError):
    """No Fourier mode of the requested dimension falls inside the window."""

    def __init__(self, n: int, smallest_admissible: int):
        self.n = n
        self.smallest_admissible = smallest_admissible
        super().__init__(
            f"window too narrow for n={n}: no mode 2*pi*k/n lies in the "
            f"shrunk interval; smallest admissible n is {smallest_admissible}"
        )


class NumericalFailure(QfdiscError, RuntimeError):
    """Raised when a numerical invariant fails beyond its tolerance."""
