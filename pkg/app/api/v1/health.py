"""
Health check API endpoints for the surgery calculator.
"""

import time
from datetime import datetime

from fastapi import APIRouter, Depends, HTTPException, status

from app.core.dependencies import (
    get_logger_dependency,
    get_settings_dependency,
    get_surgery_service_dependency,
)
from app.models.request_models import HealthResponse
from app.services.knotio import list_fixtures

# Create router
router = APIRouter(prefix="/health", tags=["health"])

# Store app start time
app_start_time = time.time()


@router.get("/", response_model=HealthResponse)
async def health_check(
    settings=Depends(get_settings_dependency),
    logger=Depends(get_logger_dependency),
    service=Depends(get_surgery_service_dependency),
):
    """Health check: the engines answer a trefoil query and the fixtures are readable."""
    try:
        services = {}

        try:
            service.knot_summary("torus:2,3")
            services["engines"] = "healthy"
        except Exception as e:
            logger.warning("Engine health check failed", error=str(e))
            services["engines"] = "unhealthy"

        services["fixtures"] = "healthy" if list_fixtures() else "missing"

        overall_status = "healthy" if all(value == "healthy" for value in services.values()) else "degraded"
        return HealthResponse(
            status=overall_status,
            timestamp=datetime.now(),
            version=settings.app_version,
            uptime=time.time() - app_start_time,
            services=services,
        )

    except Exception as e:
        logger.error("Health check failed", error=str(e))
        raise HTTPException(
            status_code=status.HTTP_503_SERVICE_UNAVAILABLE,
            detail="Health check failed",
        )


@router.get("/ready")
async def readiness_check():
    """Readiness check for container health checks."""
    return {"status": "ready"}


@router.get("/live")
async def liveness_check():
    """Liveness check for container health checks."""
    return {"status": "alive"}
