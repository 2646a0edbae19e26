import random
import sys
from pathlib import Path

import pytest

from tcd import dsl
from tcd.groups import make_group

EXAMPLES = Path(__file__).resolve().parents[1] / "src" / "tcd" / "examples"


def example_program(name):
    return dsl.load_program(EXAMPLES / f"{name}.tcd")


def example_bindings(kind, name, program=None):
    return dsl.load_bindings(kind, EXAMPLES / f"{name}.bind.json", program)


@pytest.fixture(scope="session")
def S3():
    return make_group("S3")


@pytest.fixture(scope="session")
def D4():
    return make_group("D4")


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
