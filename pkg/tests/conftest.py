import pytest

from hypermatch.index import build_index
from hypermatch.instances import f1_data, f1_query

A, B, C = 0, 1, 2


def e(n: int) -> int:
    """Fixture hyperedge e<n> (1-based in the fixture naming) as a 0-based id."""
    return n - 1


@pytest.fixture(scope="session")
def f1():
    return f1_data()


@pytest.fixture(scope="session")
def f1q():
    return f1_query()


@pytest.fixture(scope="session")
def f1_idx(f1):
    return build_index(f1)


_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        if call.excinfo is None:
            outcome = "PASS"
        elif call.excinfo.errisinstance(pytest.skip.Exception):
            outcome = "SKIP"
        else:
            outcome = "FAIL"
        _criteria[n] = (outcome, title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcome, title = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d} {outcome}: {title}")
