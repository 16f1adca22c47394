import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from crossflow.model import IntersectionParams

settings.register_profile(
    "crossflow", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("crossflow")


@pytest.fixture
def fig6():
    return IntersectionParams(0.3, 0.5, 2.0, 0.0)


@pytest.fixture
def dense():
    """lambda = 1, r = 0.5, dd = 2: the reference point of the delta_d curves."""
    return IntersectionParams.from_density(1.0, 0.5, 2.0, 0.0)


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
