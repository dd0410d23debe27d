import os
import sys

import pytest

# make the independent oracles importable as a plain module
sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = []


@pytest.fixture
def verdict(request):
    """Record one pass/fail line for an acceptance criterion.

    Call with (number, ok, detail); the line is printed immediately and
    repeated in the terminal summary.
    """
    def record(num, ok, detail):
        line = "criterion %2d: %s  %s" % (num, "PASS" if ok else "FAIL", detail)
        _CRITERIA.append((num, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_CRITERIA):
        terminalreporter.write_line(line)
