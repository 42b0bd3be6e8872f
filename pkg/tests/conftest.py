"""Shared pytest hooks.

The acceptance tests push one summary line per criterion into a shared
list; the terminal-summary hook prints them after the run so the verdict
survives output capturing.
"""
import pytest

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report() -> list[str]:
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
