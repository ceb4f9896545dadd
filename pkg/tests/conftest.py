import time
from contextlib import contextmanager

import pytest

CRITERIA = []


@pytest.fixture
def criterion():
    """Time an acceptance criterion, print one pass/fail line and enforce its budget."""

    @contextmanager
    def run(number, title, budget):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            status = "PASS" if ok and elapsed < budget else "FAIL"
            line = f"criterion {number}: {status}  {title}  [{elapsed:.2f}s, budget {budget:g}s]"
            CRITERIA.append((number, line))
            print(line)
        assert elapsed < budget, f"criterion {number} took {elapsed:.2f}s, budget {budget:g}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(CRITERIA):
            terminalreporter.write_line(line)
