import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def record_criterion():
    """Store one pass/fail line per acceptance criterion for the summary."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[n])
