import random

import pytest

_REPORT = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def acceptance_report(request):
    return request.config.stash.setdefault(_REPORT, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_REPORT, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
