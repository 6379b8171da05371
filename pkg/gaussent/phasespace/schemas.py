from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from gaussent.exceptions import DegenerateNumerics, DimensionMismatch, IndexOutOfRange, NonFinite

SYMPLECTIC_TOLERANCE = 1e-8


def _as_frozen_matrix(value) -> np.ndarray:
    matrix = np.array(value, dtype=float)
    if matrix.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NonFinite("matrix contains NaN or infinite entries")
    matrix.setflags(write=False)
    return matrix


def symplectic_defect(matrix: np.ndarray) -> float:
    """max|S^T Omega S - Omega|, relative to max(1, max|S|^2)."""
    form = np.kron(np.eye(matrix.shape[0] // 2), [[0.0, 1.0], [-1.0, 0.0]])
    scale = max(1.0, float(np.max(np.abs(matrix))) ** 2)
    return float(np.max(np.abs(matrix.T @ form @ matrix - form))) / scale


class _PhaseSpaceMatrix(BaseModel):
    """2N x 2N real matrix in mode-major (x1, p1, x2, p2, ...) ordering."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_modes: int = Field(..., ge=1)
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _coerce_matrix(cls, value):
        return _as_frozen_matrix(value)

    @model_validator(mode="after")
    def _check_shape(self):
        expected = (2 * self.n_modes, 2 * self.n_modes)
        if self.matrix.shape != expected:
            raise DimensionMismatch(
                f"{self.n_modes} modes need a {expected[0]}x{expected[1]} matrix, got {self.matrix.shape}"
            )
        return self

    @classmethod
    def from_matrix(cls, matrix, **kwargs):
        matrix = _as_frozen_matrix(matrix)
        if matrix.shape[0] % 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"matrix shape {matrix.shape} is not 2N x 2N")
        return cls(n_modes=matrix.shape[0] // 2, matrix=matrix, **kwargs)

    def block(self, i: int, j: int) -> np.ndarray:
        """2x2 block coupling modes i and j (1-based labels)."""
        for label in (i, j):
            if not 1 <= label <= self.n_modes:
                raise IndexOutOfRange(f"mode {label} outside 1..{self.n_modes}")
        return self.matrix[2 * (i - 1):2 * i, 2 * (j - 1):2 * j]


class CovarianceMatrix(_PhaseSpaceMatrix):
    """Second moments of a Gaussian state, vacuum = identity.

    ``transposed`` marks partially transposed matrices, which need not be
    physical states.
    """

    transposed: bool = False

    def to_document(self) -> dict:
        return {"n_modes": self.n_modes, "ordering": "xpxp", "matrix": self.matrix.tolist()}

    @classmethod
    def from_document(cls, document: "CovarianceDocument") -> "CovarianceMatrix":
        return cls(n_modes=document.n_modes, matrix=document.matrix)


class SymplecticFormMatrix(_PhaseSpaceMatrix):
    pass


class SymplecticTransform(_PhaseSpaceMatrix):
    """Real 2N x 2N matrix S with S^T Omega S = Omega."""

    @model_validator(mode="after")
    def _check_group(self):
        if self.matrix.shape != (2 * self.n_modes, 2 * self.n_modes):
            return self
        defect = symplectic_defect(self.matrix)
        if defect > SYMPLECTIC_TOLERANCE:
            raise DegenerateNumerics(f"matrix does not preserve the symplectic form (defect {defect:.3e})")
        return self


class SymplecticSpectrum(BaseModel):
    values: list[float]
    transposed: bool = False

    @property
    def minimum(self) -> float:
        return self.values[0]


class Bipartition(BaseModel):
    side_a: frozenset[int]
    side_b: frozenset[int]

    @model_validator(mode="after")
    def _check_sides(self):
        if not self.side_a or not self.side_b:
            raise IndexOutOfRange("both sides of a bipartition must be nonempty")
        if self.side_a & self.side_b:
            raise IndexOutOfRange(f"sides overlap on modes {sorted(self.side_a & self.side_b)}")
        if min(self.side_a | self.side_b) < 1:
            raise IndexOutOfRange("mode labels start at 1")
        return self

    @classmethod
    def split(cls, n_modes: int, side_a) -> "Bipartition":
        side_a = frozenset(side_a)
        return cls(side_a=side_a, side_b=frozenset(range(1, n_modes + 1)) - side_a)


class ValidationReport(BaseModel):
    symmetric: bool
    physical: bool
    nu_min: float


class WilliamsonResult(BaseModel):
    s: SymplecticTransform
    nu: SymplecticSpectrum


# Wire format shared by the CLI and the HTTP service
class CovarianceDocument(BaseModel):
    n_modes: int = Field(..., ge=1)
    ordering: Literal["xpxp"] = "xpxp"
    matrix: list[list[float]]


class LogNegativityRequest(BaseModel):
    cm: CovarianceDocument
    side_a: Optional[list[int]] = None


class LogNegativityResponse(BaseModel):
    log_negativity: float
    transposed_spectrum: list[float]
