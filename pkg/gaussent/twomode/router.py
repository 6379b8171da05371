from fastapi import APIRouter

from gaussent.exceptions import NotSymmetric
from gaussent.phasespace.schemas import CovarianceDocument, CovarianceMatrix
from gaussent.twomode import service
from gaussent.twomode.schemas import (
    EntanglementClass,
    ExtremalReport,
    PurityRequest,
    TwoModeAnalysis,
)

router = APIRouter(prefix="/twomode", tags=["twomode"])


@router.post("/invariants", response_model=TwoModeAnalysis)
async def invariants(document: CovarianceDocument):
    inv = service.invariants_from_cm(CovarianceMatrix.from_document(document))
    try:
        eof = service.eof_symmetric(inv)
    except NotSymmetric:
        eof = None
    return TwoModeAnalysis(
        invariants=inv,
        standard_form=service.standard_form_from_invariants(inv),
        ppt=service.ppt_eigenvalues(inv),
        log_negativity=service.log_negativity_two_mode(inv),
        entanglement_class=service.classify_by_purities(inv.mu1, inv.mu2, inv.mu),
        eof=eof,
    )


@router.post("/classify")
async def classify(request: PurityRequest) -> dict[str, EntanglementClass]:
    return {"class": service.classify_by_purities(request.mu1, request.mu2, request.mu)}


@router.post("/extremal", response_model=ExtremalReport)
async def extremal(request: PurityRequest):
    return service.extremal_entanglement(request.mu1, request.mu2, request.mu)
