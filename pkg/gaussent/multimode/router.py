from fastapi import APIRouter

from gaussent.multimode import service
from gaussent.multimode.schemas import GhzTypeSpec, LocalizeRequest, LocalizeResponse
from gaussent.phasespace.schemas import CovarianceDocument, CovarianceMatrix

router = APIRouter(prefix="/multimode", tags=["multimode"])


@router.post("/ghz", response_model=CovarianceDocument)
async def ghz(spec: GhzTypeSpec):
    return service.ghz_type_state(spec).to_document()


@router.post("/localize", response_model=LocalizeResponse)
async def localize(request: LocalizeRequest):
    result = service.unitary_localization(CovarianceMatrix.from_document(request.cm), request.split)
    return LocalizeResponse(
        eq_two_mode=result.eq_two_mode.to_document(),
        residual_modes=[mode.to_document() for mode in result.residual_modes],
        log_negativity=service.equivalent_pair_log_negativity(result),
    )
