import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(Path(__file__).parent))
sys.path.insert(0, str(ROOT / "scripts"))

DATA = ROOT / "src" / "coachnet" / "data"
GOLDEN = ROOT / "tests" / "golden"

ACCEPTANCE_RESULTS: list[tuple[str, str, float, str]] = []


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, elapsed, note in ACCEPTANCE_RESULTS:
        line = f"[{status}] {name} ({elapsed:.2f}s)"
        if note:
            line += f" - {note}"
        terminalreporter.write_line(line)
