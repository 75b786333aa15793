import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polycalc import corpus
from polycalc.poly import from_arities

settings.register_profile(
    "polycalc",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("polycalc")


def polys(max_pos: int = 3, max_dir: int = 3):
    """Polynomials on positions 0..n-1 with direction sets 0..k-1."""
    return st.lists(st.integers(0, max_dir), max_size=max_pos).map(from_arities)


small_polys = polys(2, 2)
seeds = st.integers(0, 2**32 - 1)


def mor_between(p, q, seed):
    """A seeded map p → q, or None when the hom-set is empty."""
    return corpus.random_mor(random.Random(seed), p, q)


# ---- one summary line per acceptance criterion -----------------------------------------------

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _criteria[value] = "pass" if report.passed else "fail"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_criteria.items()):
        terminalreporter.write_line(f"criterion {number:>2} [{status.upper()}] {title}")


@pytest.fixture(autouse=True)
def _tag_criterion(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        record_property("criterion", tuple(marker.args))
