import numpy as np
import pytest

from lmsvtail.gauss_lrd import LrdSpec
from lmsvtail.tails import NoiseSpec, VolatilitySpec


@pytest.fixture
def small_sample():
    return np.array([1.0, 2.0, 4.0, 8.0])


@pytest.fixture
def pareto2():
    return NoiseSpec(2.0)


@pytest.fixture
def vol_half():
    return VolatilitySpec.exp(0.5)


@pytest.fixture
def fgn09():
    return LrdSpec(0.9)


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
