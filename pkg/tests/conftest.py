import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# criterion -> (passed, detail), filled in by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key:>3} {'PASS' if ok else 'FAIL'}  {detail}")
