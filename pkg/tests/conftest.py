import pytest

_LINES = []


@pytest.fixture
def criterion():
    """record(number, label, ok, detail) adds one PASS/FAIL line to the
    acceptance summary printed at the end of the run."""
    def record(number, label, ok, detail=""):
        line = "criterion %2d  %-44s %s" % (number, label, "PASS" if ok else "FAIL")
        if detail:
            line += "  (%s)" % detail
        _LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_LINES, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
