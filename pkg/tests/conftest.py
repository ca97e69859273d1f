import os
import random
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from graphpaths import fixtures  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def record(number, passed, detail=""):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def E_pt():
    return fixtures.e_pt()


@pytest.fixture
def E_omega():
    return fixtures.e_omega()


@pytest.fixture
def E_ex():
    return fixtures.e_ex()


@pytest.fixture
def F_ex():
    return fixtures.f_ex()


@pytest.fixture
def F_omega():
    return fixtures.f_omega()


@pytest.fixture
def rng():
    return random.Random(20240601)
