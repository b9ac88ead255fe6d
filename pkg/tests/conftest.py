import random

import pytest

from kirillov.corpus import load_bundled

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


@pytest.fixture
def rng():
    return random.Random(1729)


@pytest.fixture(scope="session")
def h3():
    return load_bundled("heisenberg_q")


@pytest.fixture(scope="session")
def h3f3():
    return load_bundled("heisenberg_f3")


@pytest.fixture(scope="session")
def n4():
    return load_bundled("n4_q")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
