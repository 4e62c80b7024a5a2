from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from statesum import load_fixture  # noqa: E402

FIXTURES = ("circle", "sphere", "torus", "rp2", "s3")


@pytest.fixture(scope="session")
def complexes():
    return {name: load_fixture(name) for name in FIXTURES}


# ------------------------------------------------------ acceptance summary

_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(n, title, passed, detail, elapsed, budget)``."""

    def record(number, title, passed, detail, elapsed, budget):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number}: {title} ({elapsed:.2f}s / budget {budget:.0f}s) {detail}"
        _ACCEPTANCE.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
