import numpy as np
import pytest

from qdforge.archive import CentroidSet, CvtArchive


def make_archive(centroids, genotype_dim=3, bounds=None):
    c = np.asarray(centroids, dtype=float)
    if bounds is None:
        bounds = [[-10.0, 10.0]] * c.shape[1]
    return CvtArchive(CentroidSet(c, bounds), genotype_dim)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def grid_archive():
    xs = np.linspace(0.05, 0.95, 4)
    centroids = np.array([[x, y] for x in xs for y in xs])
    return make_archive(centroids, genotype_dim=3, bounds=[[0.0, 1.0], [0.0, 1.0]])


# --- acceptance summary: one line per criterion ---------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    prev = _criteria.get(number)
    if prev is None or prev[0] == "PASS":
        _criteria[number] = (status, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title, detail = _criteria[number]
        line = f"[{status}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
