"""
Shared fixtures for the surgery calculator tests.
"""

import pytest

from app.core.config import get_settings
from app.core.logging import configure_logging
from app.services.knotio import load_fixture, parse_alexander
from app.services.staircase import staircase_from_alexander
from app.services.surgery import SurgeryService

from tests.strategies import torus


@pytest.fixture(scope="session", autouse=True)
def logging_configured():
    configure_logging()


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def trefoil():
    return torus(2, 3)


@pytest.fixture(scope="session")
def t25():
    return torus(2, 5)


@pytest.fixture(scope="session")
def t211():
    return torus(2, 11)


@pytest.fixture(scope="session")
def unknot():
    return staircase_from_alexander(parse_alexander("1"))


@pytest.fixture(scope="session")
def fig8():
    return load_fixture("fig8.json")


@pytest.fixture
def service():
    return SurgeryService()
