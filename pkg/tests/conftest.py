import numpy as np
import pytest

from stablesketch import SparseVector


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_sparse(rng, dim, density=0.5, nonneg=False):
    x = rng.standard_normal(dim)
    if nonneg:
        x = np.abs(x)
    x *= rng.random(dim) < density
    if not np.any(x):
        x[rng.integers(dim)] = 1.0
    return SparseVector.from_dense(x)


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    report = outcome.get_result()
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "PASS" if report.passed else "FAIL"
        if _ACCEPTANCE.get(number, ("PASS",))[0] == "FAIL":
            status = "FAIL"  # every test of a criterion must pass
        _ACCEPTANCE[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title = _ACCEPTANCE[number]
        terminalreporter.write_line(f"{status} criterion {number}: {title}")
