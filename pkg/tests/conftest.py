import numpy as np
import pytest

from gupqm import ModelParameters


@pytest.fixture
def unit():
    return ModelParameters(beta=1.0)


@pytest.fixture
def default():
    return ModelParameters()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
