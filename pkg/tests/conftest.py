"""Print one pass/fail line per acceptance criterion at the end of a run."""

from __future__ import annotations

import pytest

_acceptance_results: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if "test_acceptance" in item.nodeid and "criterion" in item.name:
        if report.when == "call" or (report.when == "setup" and report.failed):
            _acceptance_results[item.name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance_results):
        verdict = "PASS" if _acceptance_results[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{name}: {verdict}")
