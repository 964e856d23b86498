import math

import numpy as np
import pytest
from hypothesis import settings

from fucik.grid import build_interval, build_rectangle

settings.register_profile("fucik", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("fucik")


@pytest.fixture(scope="session")
def interval():
    return build_interval(math.pi, 799)


@pytest.fixture(scope="session")
def small_interval():
    return build_interval(math.pi, 99)


@pytest.fixture(scope="session")
def square():
    return build_rectangle(math.pi, math.pi, 199, 199)


@pytest.fixture(scope="session")
def small_square():
    return build_rectangle(math.pi, math.pi, 31, 31)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(RESULTS):
        terminalreporter.write_line(line)
