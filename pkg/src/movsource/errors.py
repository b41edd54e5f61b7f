"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Array length or shape does not match the grid."""


class DomainError(ValueError):
    """Argument outside the domain where the operation is defined."""


class SourceSpeedError(DomainError):
    """Source moves at or above the wave speed."""


class ShapeConstructionError(RuntimeError):
    """Spectral shape could not be built to the required accuracy."""


class WindowTooWideError(ValueError):
    """Window half-width is too large for the domain."""


class InstabilityError(RuntimeError):
    """Non-finite values appeared during time integration."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""
