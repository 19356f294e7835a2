import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from riskbn.fixtures import IVI_ATTACK_TREE, ivi_network  # noqa: E402

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ivi():
    return ivi_network()


@pytest.fixture(scope="session")
def ivi_tree_source():
    return IVI_ATTACK_TREE


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion.

    Usage: ``criterion("2", "forward marginals", ok, detail)`` then assert.
    """

    def record(number: str, title: str, ok: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" -- {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
