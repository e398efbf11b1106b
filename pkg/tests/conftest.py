import csv
from fractions import Fraction
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

# filled by test_acceptance; echoed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def load_csv(name: str) -> list[dict]:
    with open(DATA / name, newline="") as fh:
        return list(csv.DictReader(fh))


def load_stirling() -> list[Fraction]:
    return [Fraction(x) for x in (DATA / "stirling.txt").read_text().split()]


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
