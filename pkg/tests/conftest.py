import sys
from pathlib import Path

import pytest
from hypothesis import settings

# make the oracle module importable as a plain module
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", derandomize=True, deadline=None)
settings.load_profile("default")

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record the one-line verdict of an acceptance criterion."""
    def record(number: int, passed: bool, detail: str) -> None:
        _ACCEPTANCE_LINES.append(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
