"""Error hierarchy shared by every gaussent module.

Each class name is part of the public contract: the CLI prints it on the error
stream and the HTTP service returns it in the ``error`` field.
"""

from typing import Optional


class GaussentError(Exception):
    """Base class for all domain errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NonFinite(GaussentError):
    """A matrix entry or parameter is NaN or infinite."""


class DimensionMismatch(GaussentError):
    """Matrix shape does not match the declared number of modes."""


class Unphysical(GaussentError):
    """The matrix violates the uncertainty relation sigma + i Omega >= 0."""

    def __init__(self, message: str, nu_min: Optional[float] = None):
        super().__init__(message)
        self.nu_min = nu_min


class DegenerateNumerics(GaussentError):
    """An eigensolver or decomposition failed to produce a usable result."""


class NotPositiveDefinite(GaussentError):
    pass


class EmptyKeepSet(GaussentError):
    pass


class IndexOutOfRange(GaussentError):
    pass


class ConstraintViolation(GaussentError):
    """Two-mode invariants fall outside the physical region.

    ``constraint`` is ``"global_purity_bounds"`` or ``"delta_bounds"``.
    """

    def __init__(self, message: str, constraint: str):
        super().__init__(message)
        self.constraint = constraint


class NegativeRadicand(GaussentError):
    pass


class UnphysicalPurities(GaussentError):
    """Purities violate mu1*mu2 <= mu <= mu1*mu2 / (mu1*mu2 + |mu1 - mu2|)."""


class NotSymmetric(GaussentError):
    pass


class NotBisymmetric(GaussentError):
    def __init__(self, message: str, block_pair: Optional[tuple[int, int]] = None):
        super().__init__(message)
        self.block_pair = block_pair


class NotPure(GaussentError):
    pass


class OptimizerFailure(GaussentError):
    def __init__(self, message: str, best_value: Optional[float] = None, converged: bool = False):
        super().__init__(message)
        self.best_value = best_value
        self.converged = converged


class DomainError(GaussentError):
    """An argument lies outside the domain of a closed-form expression."""
