import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from leastprime.primes import shared_table  # noqa: E402

_acceptance: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def table():
    t = shared_table()
    t.extend_to(2_000_000)
    return t


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], "PASS" if report.passed else "FAIL"))
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and not report.passed:
        _acceptance.append((report.nodeid.split("::")[-1], "SKIP" if report.skipped else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{outcome:4}  {name}")
