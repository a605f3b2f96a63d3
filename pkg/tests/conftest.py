import numpy as np
import pytest

from mockq.core import Grid1D

_LINES = pytest.StashKey()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def criterion(request):
    """Record a one-line PASS/FAIL verdict and assert it."""
    lines = request.config.stash[_LINES]

    def check(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        print(line)
        lines.append((number, line))
        assert ok, line
    return check


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda t: t[0]):
            terminalreporter.write_line(line)


@pytest.fixture
def grid():
    return Grid1D.centered(10.0, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
