from fastapi import APIRouter

from gaussent.phasespace.schemas import CovarianceMatrix
from gaussent.sharing import service
from gaussent.sharing.schemas import ContangleRequest, ContangleValue, PromiscuityReport, PromiscuityRequest

router = APIRouter(prefix="/sharing", tags=["sharing"])


@router.post("/contangle", response_model=ContangleValue)
def contangle(request: ContangleRequest):
    cm = CovarianceMatrix.from_document(request.cm)
    return service.contangle_one_vs_rest(cm, request.focus, request.seed)


@router.post("/promiscuity", response_model=PromiscuityReport)
def promiscuity(request: PromiscuityRequest):
    return service.promiscuity_report(request.b, request.seed)
