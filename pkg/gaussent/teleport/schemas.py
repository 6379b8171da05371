from typing import Literal, Optional

from pydantic import BaseModel, Field


class TeleportResourceSpec(BaseModel):
    """One p-squeezed (r1) and n-1 x-squeezed (r2) inputs through the N-splitter."""

    n_parties: int = Field(..., ge=2)
    r1: float = Field(..., ge=0)
    r2: float = Field(..., ge=0)
    noise: float = Field(1.0, ge=1)

    @property
    def r_bar(self) -> float:
        return (self.r1 + self.r2) / 2


class FidelityResult(BaseModel):
    fidelity: float = Field(..., gt=0, le=1)
    e_t: float = Field(..., ge=0, le=1)
    optimal_bias: Optional[float] = None
    n_parties: Optional[int] = None
    r_bar: Optional[float] = None
    noise: Optional[float] = None


class SweepRow(BaseModel):
    n: int
    fidelity_opt: float
    e_t: float
    fidelity_equal: float


Quadrature = Literal["x", "p"]


# API payloads
class OptimizeRequest(BaseModel):
    parties: int = Field(..., ge=2)
    r_bar: float = Field(..., ge=0)
    noise: float = Field(1.0, ge=1)
