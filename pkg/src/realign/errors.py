"""Shared exception types."""


class SizeLimitError(ValueError):
    """An enumeration or search space exceeds its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} has {size} entries, exceeding the cap of {cap}")


class NumericRangeError(ArithmeticError):
    """A floating-point evaluation over- or underflowed out of double range."""
