import random
import sys

import pytest

from helpers import SEED
from qwlsmith import fixtures
from qwlsmith.expr_io import parse_poly
from qwlsmith.poly_core import VariableContext


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture
def ctx3():
    return VariableContext(["x1", "x2", "x3"])


@pytest.fixture
def ctx2():
    return VariableContext(["x1", "x2"])


@pytest.fixture
def P(ctx3):
    return lambda src: parse_poly(src, ctx3)


@pytest.fixture(scope="session")
def worked():
    return fixtures.load("worked")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
