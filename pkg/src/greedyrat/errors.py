"""Exception types shared across the package."""


class GreedyratError(Exception):
    """Base class for all package-specific errors."""


class ResonanceError(GreedyratError):
    """The pencil z*E - A is (numerically) singular at the queried frequency."""

    def __init__(self, z, message=None):
        self.z = z
        super().__init__(message or f"pencil z*E - A is singular at z = {z}")


class SurrogatePoleError(GreedyratError):
    """The barycentric denominator vanishes at a non-support frequency."""

    def __init__(self, z):
        self.z = z
        super().__init__(f"surrogate has a pole at z = {z}")


class SupportCollisionError(GreedyratError):
    """A frequency coincides with a support point where the request is undefined."""

    def __init__(self, z):
        self.z = z
        super().__init__(f"frequency z = {z} collides with a support point")


class GridExhaustedError(GreedyratError):
    """Every test-grid point has already been sampled or excluded."""
