"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

from __future__ import annotations

import pytest

_results: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    entry = _results.setdefault(number, {"title": title, "ok": True, "details": [], "ran": False})
    if report.when == "call":
        entry["ran"] = True
        entry["details"].extend(v for k, v in item.user_properties if k == "detail")
    if report.failed:
        entry["ok"] = False
    elif report.skipped and report.when != "teardown":
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        entry = _results[number]
        status = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        detail = "; ".join(entry["details"])
        line = f"AC{number} {status}  {entry['title']}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
