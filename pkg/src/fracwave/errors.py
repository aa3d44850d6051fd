"""Exception types shared across the package."""


class SpectralConsistencyError(ValueError):
    """A spectrum violates Hermitian symmetry beyond tolerance."""


class NumericalOverflowError(FloatingPointError):
    """NaN/Inf appeared in the evolution; carries the simulation time."""

    def __init__(self, message: str, time: float):
        super().__init__(message)
        self.time = time


class SingularKernelPointError(ValueError):
    """Kernel evaluated on its singular set (p=0, q=0 or p+q=0)."""


class CapacityError(ValueError):
    """Requested grid size exceeds what the quadratic-cost routines accept."""
