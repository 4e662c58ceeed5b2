"""
Pytest configuration for circularorders tests.

Registers the hypothesis profiles used by the property suites and marks the
run as a test run for the settings module.
"""

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("corda", deadline=None)
settings.register_profile(
    "thorough",
    deadline=None,
    max_examples=500,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "corda"))


@pytest.fixture(scope="session", autouse=True)
def configure_test_environment():
    """Set up test environment variables before any tests run."""
    os.environ["TESTING"] = "True"
    yield
    os.environ.pop("TESTING", None)
