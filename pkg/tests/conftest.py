import sys


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance scoreboard after the usual test summary."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
