import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nlstring.grid import GridSpec
from nlstring.model import ModelParams, initial_modal

ALPHA = 2e-4


@pytest.fixture
def grid20():
    return GridSpec.from_intervals(20, 1.0 / 20.0)


@pytest.fixture
def model():
    return ModelParams(ALPHA)


@pytest.fixture
def baseline_state(grid20):
    return initial_modal(0.02, 2e-5, grid20)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None:
        return
    ran = {int(r.nodeid.split("criterion_")[1][:2])
           for key in ("passed", "failed") for r in terminalreporter.stats.get(key, [])
           if "test_acceptance.py::test_criterion_" in r.nodeid}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ran):
        line = acceptance.RESULTS.get(number, f"criterion {number:2d} FAIL: did not reach a verdict")
        terminalreporter.write_line(line)
