"""Shared fixtures and the acceptance-criterion report channel.

Acceptance tests record one human-readable line per criterion; the lines are
replayed in the terminal summary so a plain ``pytest -v`` run shows every
criterion verdict even with output capture enabled.
"""

import pytest

_CRITERION_LINES: list[str] = []


@pytest.fixture(scope="session")
def criterion():
    """Record '[PASS]/[FAIL] criterion N: detail' lines for the summary."""

    def record(number: int, ok: bool, detail: str) -> None:
        verdict = "PASS" if ok else "FAIL"
        _CRITERION_LINES.append(f"[{verdict}] criterion {number}: {detail}")
        assert ok, f"criterion {number}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _CRITERION_LINES:
        terminalreporter.write_line(line)
