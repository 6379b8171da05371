from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from gaussent.exceptions import DimensionMismatch, NonFinite
from gaussent.phasespace.schemas import CovarianceDocument, CovarianceMatrix, SymplecticTransform


def _as_block(value) -> np.ndarray:
    block = np.array(value, dtype=float)
    if block.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 block, got shape {block.shape}")
    if not np.all(np.isfinite(block)):
        raise NonFinite("block contains NaN or infinite entries")
    block.setflags(write=False)
    return block


class BisymmetricSpec(BaseModel):
    """Blocks of an (m + n)-mode state symmetric within each group of modes.

    ``eps_alpha`` / ``eps_beta`` couple two modes of the same group and are
    zero when the group has a single mode. ``gamma`` is every cross block.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    eps_alpha: Optional[np.ndarray] = None
    eps_beta: Optional[np.ndarray] = None

    @field_validator("alpha", "beta", "gamma", mode="before")
    @classmethod
    def _coerce_block(cls, value):
        return _as_block(value)

    @field_validator("eps_alpha", "eps_beta", mode="before")
    @classmethod
    def _coerce_optional_block(cls, value):
        return None if value is None else _as_block(value)

    @model_validator(mode="before")
    @classmethod
    def _fill_couplings(cls, data):
        if isinstance(data, dict):
            data = dict(data)
            for size, name in (("m", "eps_alpha"), ("n", "eps_beta")):
                if data.get(name) is None and data.get(size) == 1:
                    data[name] = np.zeros((2, 2))
        return data

    @model_validator(mode="after")
    def _check_couplings(self):
        if self.eps_alpha is None or self.eps_beta is None:
            raise ValueError("intra-group couplings are required for groups of more than one mode")
        return self


class GhzTypeSpec(BaseModel):
    """Fully symmetric state from one p-squeezed and n-1 x-squeezed modes.

    Give either ``squeezing`` or ``local_mixedness`` (b = 1/mu of one mode).
    """

    n_modes: int = Field(..., ge=2)
    squeezing: Optional[float] = Field(None, ge=0)
    local_mixedness: Optional[float] = Field(None, ge=1)
    thermal_noise: float = Field(1.0, ge=1)

    @model_validator(mode="after")
    def _one_parameter(self):
        if (self.squeezing is None) == (self.local_mixedness is None):
            raise ValueError("give exactly one of squeezing and local_mixedness")
        return self


class SpectralDegeneracy(BaseModel):
    nu_alpha_minus: Optional[float] = None
    mult_alpha: int = 0
    nu_beta_minus: Optional[float] = None
    mult_beta: int = 0


class LocalizationResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    eq_two_mode: CovarianceMatrix
    residual_modes: list[CovarianceMatrix]
    s_local: SymplecticTransform
    cross_residual: float = 0.0


# API payloads
class LocalizeRequest(BaseModel):
    cm: CovarianceDocument
    split: int = Field(..., ge=1)


class LocalizeResponse(BaseModel):
    eq_two_mode: CovarianceDocument
    residual_modes: list[CovarianceDocument]
    log_negativity: float
