import pytest

from pldg import PointSet

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record one pass/fail summary line; printed at the end of the session."""
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def triangle():
    return PointSet(((0.0, 0.0), (0.9, 0.0), (0.3, 0.4)))


@pytest.fixture
def path3():
    return PointSet(((0.0, 0.0), (0.9, 0.0), (1.8, 0.0)))
