#!/usr/bin/env python3
"""
Startup script for the surgery calculator.
`api` runs the HTTP server; every other mode is forwarded to the command-line front end.
"""

import os
import sys
import argparse
from pathlib import Path

# Add the app directory to Python path
sys.path.insert(0, str(Path(__file__).parent))

from app.core.config import get_settings
from app.core.logging import configure_logging, get_logger


def start_api_server():
    """Start the FastAPI server."""
    import uvicorn

    settings = get_settings()

    uvicorn.run(
        "app.main:app",
        host=settings.api_host,
        port=settings.api_port,
        workers=settings.api_workers if not settings.debug else 1,
        reload=settings.debug,
        log_level=settings.log_level.lower()
    )


def main():
    """Main entry point."""
    if len(sys.argv) > 1 and sys.argv[1] in {"compute", "obstruct", "verify", "scan"}:
        from app.cli import main as cli_main
        sys.exit(cli_main(sys.argv[1:]))

    parser = argparse.ArgumentParser(description="Knot Floer surgery calculator")
    parser.add_argument(
        "mode",
        choices=["api"],
        help="'api' for the HTTP server; compute | obstruct | verify | scan for the CLI"
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Override log level"
    )

    args = parser.parse_args()

    if args.log_level:
        os.environ["KNOTFLOER_LOG_LEVEL"] = args.log_level
        get_settings.cache_clear()

    configure_logging()
    logger = get_logger(__name__)
    logger.info("Starting surgery calculator", mode=args.mode)

    try:
        start_api_server()
    except KeyboardInterrupt:
        logger.info("Shutting down gracefully...")
    except Exception as e:
        logger.error("Failed to start service", error=str(e))
        sys.exit(1)


if __name__ == "__main__":
    main()
