"""Exception types shared across the package."""


class DepthKitError(Exception):
    """Base class for all depthkit errors."""


class DimensionError(DepthKitError):
    """Shapes or dimensions of inputs do not match."""


class DegenerateInput(DepthKitError):
    """Input is numerically degenerate (singular matrix, zero direction)."""


class ParameterError(DepthKitError):
    """A parameter is outside its documented range."""


class PreconditionError(DepthKitError):
    """Input data violates a documented precondition."""


class BudgetError(ParameterError):
    """An enumeration budget was exceeded; the result would not be exact."""
