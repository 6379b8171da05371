from typing import Literal, Optional

from pydantic import BaseModel, Field

from gaussent.phasespace.schemas import CovarianceDocument

ContangleMethod = Literal["analytic-pure", "gaussian-roof-numeric", "exact-zero", "localized"]


class ContangleValue(BaseModel):
    value: float = Field(..., ge=0)
    method: ContangleMethod
    converged: bool = True
    restarts: int = 0


class MonogamyReport(BaseModel):
    """One-vs-rest contangle of ``focus_mode`` against the sum over its partners."""

    focus_mode: int
    one_vs_rest: ContangleValue
    partners: list[int]
    pairwise: list[ContangleValue]
    residual: float


class ResidualContangle(BaseModel):
    per_focus: list[MonogamyReport]
    minimum: float


class PromiscuityReport(BaseModel):
    b: float
    pairwise_contangle: float
    residual: float


# API payloads
class ContangleRequest(BaseModel):
    cm: CovarianceDocument
    focus: int = Field(1, ge=1)
    seed: Optional[int] = None


class PromiscuityRequest(BaseModel):
    b: float = Field(..., ge=1)
    seed: Optional[int] = None
