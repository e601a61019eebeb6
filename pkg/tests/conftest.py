from __future__ import annotations

import pytest


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def report(request, capsys):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def _report(criterion: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        request.config.acceptance_lines.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in config.acceptance_lines:
            terminalreporter.write_line(line)
