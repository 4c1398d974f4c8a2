import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" or "test_acceptance" not in rep.nodeid:
                continue
            detail = dict(rep.user_properties).get("acceptance", "")
            name = rep.nodeid.split("::")[-1]
            lines.append((name, f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}: {detail}"))
    if lines:
        terminalreporter.section("ACCEPTANCE")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
