"""Shared, session-cached computations on the built-in examples."""
from __future__ import annotations

import pytest

from tmotives.catalog import example
from tmotives.tmotive import h1, homology


@pytest.fixture(scope="session")
def results():
    """``results(kind, name, epsilon)`` runs each h^1 / h_1 computation once per session."""
    cache = {}
    runners = {"h1": h1, "homology": homology}

    def get(kind: str, name: str, epsilon=None):
        key = (kind, name, epsilon)
        if key not in cache:
            cache[key] = runners[kind](example(name, epsilon))
        return cache[key]

    return get


# -- acceptance summary: one PASS/FAIL line per criterion ------------------------------------

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "tests": 0, "failed": []})
    if rep.when == "call":
        entry["tests"] += 1
    if rep.failed or (rep.when == "call" and rep.skipped):
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        ok = entry["tests"] > 0 and not entry["failed"]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {entry['title']}"
        if entry["failed"]:
            line += f"  (failed: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)
