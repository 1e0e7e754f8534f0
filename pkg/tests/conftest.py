import pytest

from ccqmkp.instance import Instance
from ccqmkp.profit import ChanceParams

_ACCEPTANCE = []


@pytest.fixture
def tiny3():
    """Three items, two knapsacks of capacity 4.4; pairs (1,2)=4 and (2,3)=6 (1-based)."""
    return Instance([2, 4, 5], [6, 8, 10], {(0, 1): 4.0, (1, 2): 6.0}, [4.4, 4.4], label="tiny3")


@pytest.fixture
def chance3():
    return ChanceParams(3.0, 0.9)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _ACCEPTANCE.append(report)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for rep in _ACCEPTANCE:
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        detail = dict(rep.user_properties).get("detail", "")
        name = rep.nodeid.split("::")[-1]
        terminalreporter.write_line(f"[{status}] {name} {detail}".rstrip())
