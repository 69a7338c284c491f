import pytest

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store one acceptance line; the verdict is printed at the end of the session."""

    def _record(number: int, title: str, passed: bool, detail: str, seconds: float):
        ACCEPTANCE[number] = (title, bool(passed), detail, seconds)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail, secs = ACCEPTANCE[n]
        terminalreporter.write_line(
            f"{'PASS' if ok else 'FAIL'}  criterion {n:2d}  {title}: {detail}  [{secs:.2f} s]")
