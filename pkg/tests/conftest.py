"""
Shared fixtures: the standard maps, their operators and a few measures.
"""
import numpy as np
import pytest

from src.dynamics.factory import make_doubling, make_gauss, make_tripling, make_twin_doubling
from src.measures.measures import HistogramMeasure
from src.transferop.weights import make_operator


@pytest.fixture(scope="session")
def doubling():
    return make_doubling()


@pytest.fixture(scope="session")
def tripling():
    return make_tripling()


@pytest.fixture(scope="session")
def twin_doubling():
    return make_twin_doubling()


@pytest.fixture(scope="session")
def gauss():
    return make_gauss(1000)


@pytest.fixture(scope="session")
def half(doubling):
    return make_operator(doubling, "half")


@pytest.fixture(scope="session")
def cos2(doubling):
    return make_operator(doubling, "cos2")


@pytest.fixture(scope="session")
def gauss_pf(gauss):
    return make_operator(gauss, "pf")


@pytest.fixture
def uniform_histogram():
    return HistogramMeasure(np.full(64, 1.0 / 64))


@pytest.fixture
def output_dir(tmp_path):
    return tmp_path / "out"
