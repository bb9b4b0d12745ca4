import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# filled by the acceptance suite, echoed after the run
CRITERIA: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
