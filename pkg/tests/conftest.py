import sys
from pathlib import Path

import pytest

# lets test modules import the shared reference helpers in oracles.py
sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


@pytest.fixture
def measured(request):
    """Attach a measured value to the acceptance summary line of this test."""

    def note(text):
        request.node.user_properties.append(("measured", text))

    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "failed": [], "passed": [], "notes": []})
    if report.when == "call" or report.failed:
        bucket = entry["failed"] if report.failed else entry["passed"]
        bucket.append(item.name)
    if report.when == "teardown":
        entry["notes"].extend(v for k, v in item.user_properties if k == "measured")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "FAIL" if entry["failed"] else "PASS"
        tr.write_line(f"criterion {number} ({entry['title']}): {status}")
        for name in entry["failed"]:
            tr.write_line(f"    failed check: {name}")
        for note in entry["notes"]:
            tr.write_line(f"    {note}")
