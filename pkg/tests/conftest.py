import numpy as np
import pytest
from hypothesis import settings

from spinstat import catalog
from spinstat.field_model import build

settings.register_profile("default", deadline=None, max_examples=40)
settings.register_profile("fast", deadline=None, max_examples=5)
settings.load_profile("default")

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        _CRITERIA.append((marker.args[0], marker.args[1], rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if outcome == 'passed' else 'FAIL'}  {title}")


@pytest.fixture
def dirac4():
    return build(catalog.get("dirac", m0=4).spec)


@pytest.fixture(params=["klein-gordon", "dirac", "proca", "schroedinger", "bdg"])
def catalog_field(request):
    return build(catalog.get(request.param).spec)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
