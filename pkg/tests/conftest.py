import numpy as np
import pytest

from drazin_kit import linalg as la

# lines printed by test_acceptance.py, echoed again in the terminal summary
ACCEPTANCE_LINES = []


def assert_close(x, y, rtol=1e-9):
    dev = la.rel_diff(np.asarray(x), np.asarray(y))
    assert dev <= rtol, f"relative deviation {dev:.3e} > {rtol:g}"


@pytest.fixture
def close():
    return assert_close


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
