class CapacityError(ValueError):
    """Requested size exceeds what can be evaluated exactly."""


class PrecisionError(ArithmeticError):
    """Accumulated rounding error exceeds the requested tolerance."""


class BoundHypothesisError(ValueError):
    """An analytic bound was requested outside the range where it is valid."""


class ConvergenceError(ArithmeticError):
    """A series or quadrature failed to reach its target accuracy."""
