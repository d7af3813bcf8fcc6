from __future__ import annotations

import random

import pytest

from helpers import E1_EXPR, E1_SIZES, E2_EXPR, E2_SIZES
from ssgsolve import make_instance


@pytest.fixture
def e1():
    return make_instance("ssg", E1_SIZES, 7, dico=E1_EXPR)


@pytest.fixture
def e2():
    return make_instance("ssg", E2_SIZES, 7, msp=E2_EXPR)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
