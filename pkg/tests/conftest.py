import pytest

_acceptance: list[tuple[str, object, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(label, ok, detail)``.

    ``ok=None`` records a skipped criterion.
    """
    def record(label, ok, detail=""):
        _acceptance.append((label, ok, detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _acceptance:
        status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status}  {label}  {detail}")
