"""
Surgery API endpoints: Floer tables, obstruction reports and knot summaries.
"""

from fastapi import APIRouter, Depends, Request
from slowapi import Limiter
from slowapi.util import get_remote_address
from starlette.concurrency import run_in_threadpool

from app.core.config import get_settings
from app.core.dependencies import get_surgery_service_dependency
from app.core.exceptions import FloerServiceException, create_http_exception
from app.core.logging import surgery_logger
from app.models.request_models import ComputeRequest, ObstructRequest
from app.services.documents import report_document, summary_document, table_document

# Create router
router = APIRouter(prefix="/surgery", tags=["surgery"])

# Rate limiting
limiter = Limiter(key_func=get_remote_address)
COMPUTE_LIMIT = f"{get_settings().rate_limit_per_minute}/minute"


@router.post("/compute")
@limiter.limit(COMPUTE_LIMIT)
async def compute_table(
    request: Request,
    body: ComputeRequest,
    service=Depends(get_surgery_service_dependency),
):
    """Per-Spin^c table of one flavor for p-surgery."""
    try:
        result = await run_in_threadpool(
            service.compute, body.knot, body.slope, body.flavor, body.engine, body.diagram
        )
    except FloerServiceException as e:
        surgery_logger.validation_failed(source=body.knot, error_code=e.error_code, message=e.message)
        raise create_http_exception(e)
    return table_document(result.table, result.diagrams, result.d_invariants)


@router.post("/obstruct")
@limiter.limit(COMPUTE_LIMIT)
async def obstruct(
    request: Request,
    body: ObstructRequest,
    service=Depends(get_surgery_service_dependency),
):
    """Reducibility report; verdicts are data, so OBSTRUCTED is still a 200."""
    try:
        report = await run_in_threadpool(service.obstruct, body.knot, body.slope)
    except FloerServiceException as e:
        surgery_logger.validation_failed(source=body.knot, error_code=e.error_code, message=e.message)
        raise create_http_exception(e)
    return report_document(report)


@router.get("/knots/{spec:path}")
async def knot_summary(spec: str, service=Depends(get_surgery_service_dependency)):
    """Genus, Alexander polynomial, ν and V/H of a knot spec."""
    try:
        summary = await run_in_threadpool(service.knot_summary, spec)
    except FloerServiceException as e:
        raise create_http_exception(e)
    return summary_document(summary)
