import pytest

from bmenet import Split, make_network

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def split5():
    return lambda *part: Split.from_part(part, 5)


@pytest.fixture
def n1():
    """Pentagon with the single bridge {1,2}|{3,4,5}."""
    return make_network((1, 2, 3, 4, 5), [Split.from_part([1, 2], 5)])


@pytest.fixture
def caterpillar5():
    """The 5-leaf tree ((1,2),3,(4,5))."""
    return make_network((1, 2, 3, 4, 5), [Split.from_part([1, 2], 5), Split.from_part([4, 5], 5)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
