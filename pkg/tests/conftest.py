import sys
from pathlib import Path

import pytest

from growthbound import _accel

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(params=["numba", "numpy"])
def kernel_backend(request, monkeypatch):
    """Run a test once per kernel path."""
    monkeypatch.setattr(_accel, "USE_NUMBA", request.param == "numba")
    monkeypatch.setattr(_accel, "MIN_WORK", 0)
    return request.param


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion."""

    def emit(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
