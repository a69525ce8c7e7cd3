import pytest

_ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion for the summary table.

    Usage: ``criterion(number, text, passed, detail)``; the test still asserts
    on its own.
    """

    def record(number, text, passed, detail=""):
        _ACCEPTANCE[number] = (text, passed, detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        text, passed, detail = _ACCEPTANCE[number]
        status = "INFO" if passed is None else ("PASS" if passed else "FAIL")
        tr.write_line(f"[{status}] {number:>2}. {text}" + (f"  ({detail})" if detail else ""))
