import os

import pytest
from hypothesis import HealthCheck, settings

from pgact.linalg import Field

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("PGACT_HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def QQ():
    return Field.rational()


@pytest.fixture(params=["rational", "fp:2", "fp:3", "fp:7"])
def any_field(request):
    return Field.parse(request.param)


_CRITERIA_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA_KEY] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict; the summary prints every recorded line."""
    results = request.config.stash[_CRITERIA_KEY]

    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        results[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_CRITERIA_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
