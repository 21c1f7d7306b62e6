import numpy as np
import pytest
from hypothesis import strategies as st

from explainclust.data import Dataset


def random_dataset(rng, n, d):
    return Dataset(rng.uniform(0.0, 1.0, size=(n, d)))


@st.composite
def datasets(draw, min_n=2, max_n=10, max_d=3, grid=False):
    n = draw(st.integers(min_n, max_n))
    d = draw(st.integers(1, max_d))
    if grid:
        elem = st.integers(0, 4).map(float)
    else:
        elem = st.floats(-100, 100, allow_nan=False, allow_infinity=False, width=32).map(float)
    rows = draw(st.lists(st.lists(elem, min_size=d, max_size=d), min_size=n, max_size=n))
    return Dataset(np.array(rows))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def line3():
    return Dataset([[0.0], [1.0], [3.0]])


_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    ok = report.passed
    prev = _CRITERIA.get(number)
    if report.when == "call" or not ok:
        _CRITERIA[number] = (title, ok and (prev is None or prev[1]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
