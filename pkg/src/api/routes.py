import math

from fastapi import APIRouter, HTTPException, Response, status

from src.core.exceptions import PovmError
from src.models import Rank1Decomposition
from src.schemas import (
    ApiResponse,
    DecomposeRequest,
    FigureSpec,
    ProbabilityRequest,
    ProbabilityResponse,
    SampleReport,
    SampleRequest,
    SetValidityReport,
    UsdRequest,
    UsdResponse,
    ValidateRequest,
)
from src.services import bloch_core, discrimination
from src.services.render_service import render_svg
from src.services.sampler import SamplerService
from src.utils.helpers import to_radians

router = APIRouter()

# Initialize services
sampler_service = SamplerService()


def _unprocessable(e: PovmError) -> HTTPException:
    return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))


def _design_response(design) -> UsdResponse:
    return UsdResponse(design=design, verification=discrimination.verify_error_free(design))


@router.post("/validate", response_model=SetValidityReport)
async def validate_povm(request: ValidateRequest):
    """Validity report of a candidate measurement; an invalid set is not an error"""
    return bloch_core.validate_set(request.povm)

@router.post("/probabilities", response_model=ProbabilityResponse)
async def outcome_probabilities(request: ProbabilityRequest):
    """Outcome distribution of a valid measurement on a state"""
    try:
        return ProbabilityResponse(
            probabilities=bloch_core.outcome_distribution(request.povm, request.state)
        )
    except PovmError as e:
        raise _unprocessable(e)

@router.post("/decompose", response_model=ApiResponse[Rank1Decomposition])
async def decompose_element(request: DecomposeRequest):
    """Split one element into its two rank-1 parts"""
    try:
        decomposition = bloch_core.decompose_rank1(request.element)
    except PovmError as e:
        raise _unprocessable(e)
    return ApiResponse(data=decomposition, message="Element decomposed successfully")

@router.get("/usd", response_model=UsdResponse)
async def usd_for_angle(alpha: float, degrees: bool = False):
    """Error-free discrimination design for the canonical pair at Bloch angle alpha"""
    if not math.isfinite(alpha):
        raise HTTPException(status_code=400, detail="alpha must be finite")
    try:
        return _design_response(discrimination.design_usd_for_angle(to_radians(alpha, degrees)))
    except PovmError as e:
        raise _unprocessable(e)

@router.post("/usd", response_model=UsdResponse)
async def usd_for_states(request: UsdRequest):
    """Error-free discrimination design for two pure states"""
    try:
        return _design_response(discrimination.design_usd(request.r_psi, request.r_phi))
    except PovmError as e:
        raise _unprocessable(e)

@router.post("/sample", response_model=SampleReport)
async def sample(request: SampleRequest):
    """Seeded simulation of n measurements"""
    try:
        return sampler_service.sample_outcomes(request.povm, request.state, request.n, request.seed)
    except PovmError as e:
        raise _unprocessable(e)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))

@router.post("/render")
async def render(figure: FigureSpec):
    """SVG drawing of a figure specification"""
    return Response(content=render_svg(figure), media_type="image/svg+xml")
