import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
REPRO = os.path.join(ROOT, "reproductions")

_RESULTS = []


class Criterion:
    """Records one acceptance line and asserts it."""

    def __init__(self, number, title):
        self.number = number
        self.title = title

    def check(self, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {self.number}: {self.title} :: {detail}"
        _RESULTS.append((self.number, line))
        print(line, file=sys.stderr)
        assert passed, line


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_RESULTS, key=lambda r: r[0]):
        terminalreporter.write_line(line)
