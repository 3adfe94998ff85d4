import pytest

from upbforge.catalog import CompleteBasis, tiles_3x3, tiles_3x3_right_block, tiles_3x3_shifted


@pytest.fixture
def tiles():
    return tiles_3x3()


@pytest.fixture
def shifted_block():
    return tiles_3x3_right_block()


@pytest.fixture
def shifted_verbatim():
    return tiles_3x3_shifted()


@pytest.fixture
def cb33():
    return CompleteBasis((3, 3))


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
