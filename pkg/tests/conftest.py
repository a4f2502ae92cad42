import sys

import numpy as np
import pytest

from conjp.geometry import annulus, boundary_grid, make_domain

R = 0.5


def three_connected():
    """Asymmetric 3-connected domain with the origin inside the first hole."""
    return make_domain([(0, 1), (-0.08 + 0.03j, 0.15), (0.45 - 0.2j, 0.15)])


def example_domain():
    return make_domain([(0, 1), (-0.4, 0.15), (0.45, 0.2)])


@pytest.fixture(scope="session")
def ann():
    return annulus(R)


@pytest.fixture(scope="session")
def ann_grid(ann):
    return boundary_grid(ann, 256)


@pytest.fixture(scope="session")
def d3():
    return three_connected()


@pytest.fixture(scope="session")
def d3_grid(d3):
    return boundary_grid(d3, 256)


@pytest.fixture(scope="session")
def dex():
    return example_domain()


@pytest.fixture(scope="session")
def dex_grid(dex):
    return boundary_grid(dex, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
