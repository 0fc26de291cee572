import pytest

ACCEPTANCE_RESULTS = []


@pytest.fixture
def record_criterion():
    """Record one acceptance line; printed again in the terminal summary."""

    def _record(number, name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {name}" + (f" -- {detail}" if detail else "")
        print(line)
        ACCEPTANCE_RESULTS.append((number, line))
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(line)
