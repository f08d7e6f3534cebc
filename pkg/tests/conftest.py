import pytest
from hypothesis import HealthCheck, settings

from lcjdt import CanonicalMatrix, JacobiParams, LcjdtContext

settings.register_profile("lcjdt", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lcjdt")


@pytest.fixture(scope="session")
def params():
    return JacobiParams(0.5, -0.5)


@pytest.fixture(scope="session")
def ctx(params):
    return LcjdtContext(params, CanonicalMatrix(1.0, 1.0, 1.0, 2.0))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
