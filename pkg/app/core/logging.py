"""
Structured logging configuration for the surgery calculator.
Supports multiple log levels and formats for different environments.
"""

import sys
import logging
import structlog

from app.core.config import get_settings


def configure_logging() -> None:
    """Configure structured logging for the application."""
    settings = get_settings()

    # Convert string level to logging constant
    numeric_level = getattr(logging, settings.log_level.upper(), logging.INFO)

    # stdout is reserved for CLI reports
    logging.basicConfig(
        level=numeric_level,
        format="%(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(numeric_level)

    processors = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]

    if settings.log_format == "console":
        processors.append(structlog.dev.ConsoleRenderer())
    else:
        processors.append(add_service_context)
        processors.append(structlog.processors.JSONRenderer())

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def add_service_context(logger, method_name, event_dict):
    """Add service context to all log entries."""
    settings = get_settings()
    event_dict["service"] = settings.app_name
    event_dict["version"] = settings.app_version
    event_dict["environment"] = settings.environment
    return event_dict


def get_logger(name: str) -> structlog.BoundLogger:
    """Get a structured logger instance."""
    return structlog.get_logger(name)


class SurgeryLogger:
    """Specialized logger for cone and obstruction runs."""

    def __init__(self, name: str = "surgery"):
        self.logger = get_logger(name)

    def cone_built(self, knot: str, p: int, residue: int, a_nodes: int, b_nodes: int, **kwargs):
        """Log a truncated cone diagram."""
        self.logger.debug(
            "Truncated cone built",
            knot=knot,
            p=p,
            residue=residue,
            a_nodes=a_nodes,
            b_nodes=b_nodes,
            event_type="cone_built",
            **kwargs
        )

    def engine_run(self, knot: str, p: int, engine: str, flavor: str, duration: float, **kwargs):
        """Log a completed table computation."""
        self.logger.info(
            "Engine run completed",
            knot=knot,
            p=p,
            engine=engine,
            flavor=flavor,
            duration=duration,
            event_type="engine_run",
            **kwargs
        )

    def engines_disagree(self, knot: str, p: int, residue, left: str, right: str, **kwargs):
        """Log an engine mismatch."""
        self.logger.error(
            "Engines disagree",
            knot=knot,
            p=p,
            residue=residue,
            left=left,
            right=right,
            event_type="engines_disagree",
            **kwargs
        )

    def report_ready(self, knot: str, p: int, verdict: str, stage: str, **kwargs):
        """Log an obstruction report."""
        self.logger.info(
            "Obstruction report ready",
            knot=knot,
            p=p,
            verdict=verdict,
            stage=stage,
            event_type="report_ready",
            **kwargs
        )

    def validation_failed(self, source: str, error_code: str, message: str, **kwargs):
        """Log rejected input."""
        self.logger.warning(
            "Input validation failed",
            source=source,
            error_code=error_code,
            error=message,
            event_type="validation_failed",
            **kwargs
        )

    def scan_started(self, knots: int, slopes: int, workers: int, **kwargs):
        """Log the start of a scan."""
        self.logger.info(
            "Scan started",
            knots=knots,
            slopes=slopes,
            workers=workers,
            event_type="scan_started",
            **kwargs
        )

    def scan_completed(self, runs: int, obstructed: int, duration: float, **kwargs):
        """Log the end of a scan."""
        self.logger.info(
            "Scan completed",
            runs=runs,
            obstructed=obstructed,
            duration=duration,
            event_type="scan_completed",
            **kwargs
        )

    def verify_completed(self, checks: int, failures: int, duration: float, **kwargs):
        """Log the end of a verification run."""
        level = "info" if failures == 0 else "error"
        getattr(self.logger, level)(
            "Verification completed",
            checks=checks,
            failures=failures,
            duration=duration,
            event_type="verify_completed",
            **kwargs
        )

    def api_request(self, method: str, endpoint: str, status_code: int,
                    response_time: float, **kwargs):
        """Log API requests."""
        self.logger.info(
            "API request",
            method=method,
            endpoint=endpoint,
            status_code=status_code,
            response_time=response_time,
            event_type="api_request",
            **kwargs
        )


# Initialize the surgery logger
surgery_logger = SurgeryLogger()
