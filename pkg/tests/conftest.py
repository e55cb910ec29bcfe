import pytest
from hypothesis import HealthCheck, settings

from helpers import s1

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def S1():
    return s1()


def pytest_terminal_summary(terminalreporter):
    from helpers import GATE
    if GATE:
        terminalreporter.section("acceptance")
        for line in GATE:
            terminalreporter.write_line(line)
