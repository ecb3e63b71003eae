"""Collects the per-criterion verdicts of the acceptance suite and prints them at the end."""

import pytest

VERDICTS = {}


@pytest.fixture
def verdict(request):
    """Call ``verdict(n, ok, detail)`` once per criterion; the line is echoed live and in the summary."""
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        VERDICTS[number] = line
        with capman.global_and_fixture_disabled():
            print(f"\n{line}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[number])
