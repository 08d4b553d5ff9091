"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid dimension, degree or operator shape."""


class CapacityError(RuntimeError):
    """Requested instance exceeds the enumeration / memory budget."""


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


class PrecisionError(ArithmeticError):
    """A transform produced counts that are not exact integers."""
