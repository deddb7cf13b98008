import pytest

from quadcf.exactfield import QuadParams
from quadcf.lattice import EISENSTEIN, GAUSSIAN, LatticePoint


def gp(x, y=0):
    return LatticePoint(GAUSSIAN, x, y)


def ep(x, y):
    return LatticePoint(EISENSTEIN, x, y)


@pytest.fixture
def lucas():
    """``X^2 - 3X + 1`` over the Gaussian field."""
    return QuadParams.unchecked(gp(3), gp(1))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
