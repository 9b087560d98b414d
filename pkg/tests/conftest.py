"""Shared pytest wiring.

The acceptance tests are named ``test_criterion_<n>_...``; this hook gathers
their outcomes and prints one pass/fail line per criterion at the end of the
session so the acceptance status is readable at a glance.
"""

from __future__ import annotations

_CRITERION_OUTCOMES: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if name.startswith("test_criterion_"):
        _CRITERION_OUTCOMES[name] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_OUTCOMES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_CRITERION_OUTCOMES, key=_criterion_sort_key):
        outcome = _CRITERION_OUTCOMES[name]
        terminalreporter.write_line(f"{name}: {outcome}")


def _criterion_sort_key(name: str):
    digits = ""
    for ch in name[len("test_criterion_"):]:
        if ch.isdigit():
            digits += ch
        else:
            break
    return (int(digits) if digits else 0, name)
