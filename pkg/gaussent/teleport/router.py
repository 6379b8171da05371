from fastapi import APIRouter

from gaussent.teleport import service
from gaussent.teleport.schemas import FidelityResult, OptimizeRequest

router = APIRouter(prefix="/teleport", tags=["teleport"])


@router.post("/optimize", response_model=FidelityResult)
async def optimize(request: OptimizeRequest):
    return service.optimal_fidelity(request.parties, request.r_bar, request.noise)
