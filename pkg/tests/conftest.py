import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion at session end."""
    rows = []
    for status, label in (("passed", "PASS"), ("failed", "FAIL"),
                          ("error", "ERROR"), ("skipped", "SKIPPED")):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" in nodeid and "::" in nodeid:
                rows.append((nodeid.split("::")[-1], label))
    if rows:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name, label in sorted(set(rows)):
            terminalreporter.write_line(f"{name}: {label}")
