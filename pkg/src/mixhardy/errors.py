"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where a quantity is defined or finite."""


class UnsupportedDimensionError(DomainError):
    """The requested computation is only implemented for low dimensions."""


class QuadratureError(RuntimeError):
    """Adaptive integration failed to reach the requested tolerance."""
