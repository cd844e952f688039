from __future__ import annotations

from pathlib import Path

import pytest

from branching.grouplib import fixture_group
from branching.permcore import perm_from_image_row

DATA = Path(__file__).resolve().parents[1] / "src" / "branching" / "data"

PSL28_ROWS = ["1 6 4 3 9 2 8 7 5", "4 5 8 9 6 2 3 7 1", "5 2 8 1 6 9 7 4 3"]

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def psl28():
    return fixture_group("psl(2,8)-paper")


@pytest.fixture(scope="session")
def hurwitz_vector():
    return [perm_from_image_row(r) for r in PSL28_ROWS]


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def report(name: str, ok: bool, detail: str = ""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}{'  ' + detail if detail else ''}")
        assert ok, f"{name}: {detail}"

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
