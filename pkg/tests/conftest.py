from __future__ import annotations

import warnings

import pytest
from hypothesis import HealthCheck, settings

warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")

settings.register_profile("suite", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

from fastapi.testclient import TestClient

from beaconql.llm.scripted import rule_based_provider
from beaconql.mockbeacon import create_mock_app, load_default_fixture


@pytest.fixture(scope="session")
def provider():
    return rule_based_provider()


@pytest.fixture(scope="session")
def cohort():
    return load_default_fixture()


@pytest.fixture()
def beacon_client(cohort):
    return TestClient(create_mock_app(cohort))
