"""
Request logging middleware for the surgery calculator.
"""

import time
from typing import Callable

from fastapi import Request, Response
from starlette.middleware.base import BaseHTTPMiddleware

from app.core.logging import surgery_logger


class LoggingMiddleware(BaseHTTPMiddleware):
    """Logs every HTTP request through the surgery event logger."""

    async def dispatch(self, request: Request, call_next: Callable) -> Response:
        start_time = time.time()
        response = await call_next(request)
        surgery_logger.api_request(
            method=request.method,
            endpoint=request.url.path,
            status_code=response.status_code,
            response_time=round(time.time() - start_time, 4),
            client_ip=request.client.host if request.client else None,
        )
        return response
