"""
Dependency injection container for the surgery calculator.
Shared by the HTTP surface and the command-line front end.
"""

from typing import Any, Dict, Optional

from app.core.config import get_settings
from app.core.logging import get_logger
from app.services.surgery import SurgeryService


class DependencyContainer:
    """Centralized dependency injection container."""

    def __init__(self):
        self._services: Dict[str, Any] = {}
        self._initialized = False
        self._logger = get_logger(__name__)

    def initialize_sync(self) -> None:
        """Build every service; safe to call more than once."""
        if self._initialized:
            return

        self._logger.debug("Initializing dependency container")
        self._services["settings"] = get_settings()
        self._services["logger"] = get_logger("knotfloer")
        self._services["surgery"] = SurgeryService(settings=self._services["settings"])
        self._initialized = True

    async def initialize(self) -> None:
        self.initialize_sync()

    async def shutdown(self) -> None:
        if not self._initialized:
            return
        self._logger.debug("Shutting down dependency container")
        self._services.clear()
        self._initialized = False

    def get(self, service_name: str) -> Any:
        """Get a service by name."""
        if not self._initialized:
            raise RuntimeError("Dependency container not initialized")
        if service_name not in self._services:
            raise ValueError(f"Service '{service_name}' not found")
        return self._services[service_name]

    def get_settings(self):
        return self.get("settings")

    def get_logger(self):
        return self.get("logger")

    def get_surgery_service(self) -> SurgeryService:
        return self.get("surgery")


# Global dependency container
_container: Optional[DependencyContainer] = None


def get_container() -> DependencyContainer:
    """Get the global dependency container."""
    global _container
    if _container is None:
        _container = DependencyContainer()
    return _container


async def initialize_dependencies() -> None:
    await get_container().initialize()


async def shutdown_dependencies() -> None:
    global _container
    if _container is not None:
        await _container.shutdown()
        _container = None


# Dependency injection functions for FastAPI
def get_settings_dependency():
    """FastAPI dependency for settings."""
    return get_container().get_settings()


def get_logger_dependency():
    """FastAPI dependency for logger."""
    return get_container().get_logger()


def get_surgery_service_dependency() -> SurgeryService:
    """FastAPI dependency for the surgery service."""
    container = get_container()
    container.initialize_sync()
    return container.get_surgery_service()
