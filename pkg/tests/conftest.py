"""Shared fixtures, plus a terminal section for the acceptance summary."""

import pytest

_acceptance_lines = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one pass/fail line per acceptance check for the run summary."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        line = f"{status}  {name}"
        if detail:
            line += f"  [{detail}]"
        _acceptance_lines.append(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance summary")
    for line in _acceptance_lines:
        terminalreporter.write_line(line)
