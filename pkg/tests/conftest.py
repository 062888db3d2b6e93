"""Shared pytest plumbing: a pass/fail line per acceptance check."""

from __future__ import annotations

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance[name] = "PASS" if report.outcome == "passed" else "FAIL"
    elif report.outcome == "failed":
        _acceptance[name] = "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance")
    for name, outcome in sorted(_acceptance.items()):
        terminalreporter.write_line(f"{outcome} {name}")
