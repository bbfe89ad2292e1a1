import pytest

from domino_helicity.fixtures import load_fixture
from domino_helicity.tiling import enumerate_tilings


@pytest.fixture(scope="session")
def box332():
    return load_fixture("box-3-3-2")


@pytest.fixture(scope="session")
def box332_tilings(box332):
    return enumerate_tilings(box332.region)


@pytest.fixture(scope="session")
def hexfx():
    return load_fixture("hex")


@pytest.fixture(scope="session")
def box221():
    return load_fixture("box-2-2-1")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
