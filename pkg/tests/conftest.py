import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "fixtures")
GOLDEN = os.path.join(ROOT, "tests", "golden")

_criteria = {}
_outcomes = {}


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark:
            _criteria[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    if report.when == "call" or report.failed:
        prev = _outcomes.get(report.nodeid, "PASS")
        _outcomes[report.nodeid] = "FAIL" if report.failed or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, args in sorted(_criteria.items(), key=lambda kv: int(kv[1][0][2:])):
        if nodeid in _outcomes:
            terminalreporter.write_line(f"{_outcomes[nodeid]}  {args[0]}  {args[1]}")
