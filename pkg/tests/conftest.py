import pytest

_ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one acceptance criterion result: ``criterion(number, title, residual, tol)``."""

    def record(number: int, title: str, residual: float, tol: float, ok: bool | None = None, detail: str = "") -> bool:
        passed = residual <= tol if ok is None else ok
        mark = "PASS" if passed else "FAIL"
        line = f"[{mark}] criterion {number:2d}: {title}: residual={residual:.3e} tol={tol:.1e}"
        _ACCEPTANCE_LINES[number] = f"{line} {detail}".rstrip()
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[number])
