import pytest
from hypothesis import HealthCheck, settings

from chaosnn.acceptance import AcceptanceAssets
from chaosnn.dataset import generate_pool
from chaosnn.dynamics import HenonMap, Lorenz63Map

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# one criterion line per acceptance check, echoed after the run
_CRITERION_LINES = []


def record_criterion(line: str) -> None:
    _CRITERION_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance checks")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def assets():
    """Shared heavyweight assets (pools, clouds, reference nets)."""
    return AcceptanceAssets(jobs=1)


@pytest.fixture(scope="session")
def henon_pool_small():
    return generate_pool(HenonMap(), 20, 600, 500,
                         [(-0.5, 0.5), (-0.5, 0.5)], 12345)


@pytest.fixture(scope="session")
def l63_pool_small():
    return generate_pool(Lorenz63Map(), 30, 700, 500,
                         [(-20, 20), (-20, 20), (0, 50)], 54321)
