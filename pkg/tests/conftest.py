import functools

import numpy as np
import pytest

from spin1epr import bell


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@functools.lru_cache(maxsize=None)
def _bell_max(inequality, fixed_x=None, seed=0, starts=64):
    return bell.maximize_violation(inequality, fixed_x=fixed_x, seed=seed, starts=starts)


@pytest.fixture(scope="session")
def bell_max():
    """Bell optimizations are the slow part of the suite; each runs once per session."""
    return _bell_max


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance():
    """Record one PASS/FAIL line per criterion, then assert it."""

    def record(number, title, ok, detail):
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {title}: {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
