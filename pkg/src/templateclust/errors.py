"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised for invalid user-supplied arguments or malformed input files."""


class NumericalError(RuntimeError):
    """Raised when a numerical routine cannot produce a reliable result."""
