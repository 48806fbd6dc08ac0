from .fixture import (
    DEFAULT_FIXTURE_SPEC,
    CohortFixture,
    FixtureSpec,
    SiteSpec,
    StratumSpec,
    generate_fixture,
    load_default_fixture,
)
from .server import answer, create_mock_app

__all__ = [
    "CohortFixture",
    "DEFAULT_FIXTURE_SPEC",
    "FixtureSpec",
    "SiteSpec",
    "StratumSpec",
    "answer",
    "create_mock_app",
    "generate_fixture",
    "load_default_fixture",
]
