from fastapi import APIRouter, HTTPException

from gaussent.phasespace import service
from gaussent.phasespace.schemas import (
    Bipartition,
    CovarianceDocument,
    CovarianceMatrix,
    LogNegativityRequest,
    LogNegativityResponse,
    SymplecticSpectrum,
    ValidationReport,
)

router = APIRouter(prefix="/phasespace", tags=["phasespace"])


@router.post("/validate", response_model=ValidationReport)
async def validate(document: CovarianceDocument):
    return service.validate_cm(CovarianceMatrix.from_document(document))


@router.post("/spectrum", response_model=SymplecticSpectrum)
async def spectrum(document: CovarianceDocument):
    return service.symplectic_spectrum(CovarianceMatrix.from_document(document))


@router.post("/log-negativity", response_model=LogNegativityResponse)
async def log_negativity(request: LogNegativityRequest):
    cm = CovarianceMatrix.from_document(request.cm)
    if cm.n_modes < 2:
        raise HTTPException(status_code=400, detail="log-negativity needs at least two modes")
    bp = Bipartition.split(cm.n_modes, request.side_a or [1])
    return LogNegativityResponse(
        log_negativity=service.log_negativity(cm, bp),
        transposed_spectrum=service.transposed_spectrum(cm, bp).values,
    )
