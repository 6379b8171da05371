from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

SYMMETRIC_TOLERANCE = 1e-9
ORDER_TOLERANCE = 1e-9


class TwoModeStandardForm(BaseModel):
    """alpha = diag(a, a), beta = diag(b, b), gamma = diag(c_plus, c_minus)."""

    a: float
    b: float
    c_plus: float
    c_minus: float

    @model_validator(mode="after")
    def _check_ordering(self):
        if self.a < 1 - ORDER_TOLERANCE or self.b < 1 - ORDER_TOLERANCE:
            raise ValueError("local entries a, b must be at least 1")
        if self.c_plus < -ORDER_TOLERANCE or self.c_plus < abs(self.c_minus) - ORDER_TOLERANCE:
            raise ValueError("standard form requires c_plus >= |c_minus|")
        return self

    @property
    def symmetric(self) -> bool:
        return abs(self.a - self.b) <= SYMMETRIC_TOLERANCE

    @property
    def delta(self) -> float:
        return self.a ** 2 + self.b ** 2 + 2 * self.c_plus * self.c_minus


class TwoModeInvariants(BaseModel):
    mu1: float = Field(..., gt=0)
    mu2: float = Field(..., gt=0)
    mu: float = Field(..., gt=0)
    delta: float


class InvariantIntermediates(BaseModel):
    eps_minus: float = Field(..., ge=0)
    eps_plus: float = Field(..., ge=0)


class EntanglementClass(str, Enum):
    SEPARABLE = "Separable"
    COEXISTENCE = "Coexistence"
    ENTANGLED = "Entangled"


class PptPair(BaseModel):
    nu_tilde_minus: float
    nu_tilde_plus: float
    delta_tilde: float


class ExtremalReport(BaseModel):
    e_max: float
    e_min: float
    e_avg: float
    rel_error: float
    entanglement_class: EntanglementClass


class BoundsRow(BaseModel):
    mu: float
    e_min: float
    e_max: float
    entanglement_class: EntanglementClass


# API payloads
class PurityRequest(BaseModel):
    mu1: float = Field(..., gt=0, le=1)
    mu2: float = Field(..., gt=0, le=1)
    mu: float = Field(..., gt=0, le=1)


class TwoModeAnalysis(BaseModel):
    invariants: TwoModeInvariants
    standard_form: TwoModeStandardForm
    ppt: PptPair
    log_negativity: float
    entanglement_class: EntanglementClass
    eof: Optional[float] = None
