"""Exception hierarchy shared by all dimwit modules."""


class DimwitError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(DimwitError, ValueError):
    """Input violates a structural invariant (shape, normalization, symmetry)."""


class RangeError(ValidationError):
    """Scalar parameter outside its admissible interval."""


class PositivityError(ValidationError):
    """Matrix expected to be positive semi-definite has a negative eigenvalue."""


class CapacityError(DimwitError):
    """Requested enumeration exceeds the configured cap."""

    def __init__(self, count, cap):
        super().__init__(f"enumeration of {count} strategies exceeds cap {cap}")
        self.count = count
        self.cap = cap


class UnsupportedWitnessError(DimwitError, ValueError):
    """Witness shape is not handled by the requested algorithm."""


class OptimizationError(DimwitError, RuntimeError):
    """Numerical failure inside an optimizer run."""
