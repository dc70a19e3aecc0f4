from pathlib import Path

import pytest

from copematch.model import parse_instance

DATA = Path(__file__).resolve().parent.parent / "data"


def load(name: str):
    return parse_instance((DATA / name).read_text())


@pytest.fixture
def four_agents():
    return load("four_agents.txt")


@pytest.fixture
def odd_cycle():
    return load("odd_cycle.txt")


@pytest.fixture
def k33():
    return load("k33.txt")


@pytest.fixture
def single_edge():
    return parse_instance("instance v1\nu: v\nv: u\n")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(mod.line(number))
