import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria = {}
_setup_time = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion checked by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    cid, title = mark.args
    if report.when == "setup":
        _setup_time[item.nodeid] = report.duration
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        detail = ""
        if report.outcome == "failed" and call.excinfo is not None:
            detail = str(call.excinfo.value).splitlines()[0] if str(call.excinfo.value) else ""
        elif report.outcome == "skipped":
            detail = str(report.longrepr[-1]) if isinstance(report.longrepr, tuple) else ""
        secs = report.duration + (_setup_time.get(item.nodeid, 0.0) if report.when == "call" else 0.0)
        _criteria[cid] = (status, title, secs, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria):
        status, title, secs, detail = _criteria[cid]
        line = f"[{status}] criterion {cid:<3} {title} ({secs:.2f} s)"
        if detail:
            line += f": {detail}"
        terminalreporter.write_line(line)
