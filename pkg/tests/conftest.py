import json
import pathlib

import pytest
from hypothesis import settings

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def load_fixture(name):
    return json.loads((FIXTURES / name).read_text())


@pytest.fixture
def acceptance_line():
    """Record a one-line acceptance result, printed in the terminal summary."""
    def record(criterion, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
