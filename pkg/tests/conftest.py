import pytest

from coarsegeo.ball import get_ball
from coarsegeo.models import get_model

MASTER_SEED = 20260808


@pytest.fixture(scope="session")
def free_model():
    return get_model("free:2")


@pytest.fixture(scope="session")
def surface_model():
    return get_model("surface:2")


@pytest.fixture(scope="session")
def free_ball8():
    return get_ball("free:2", 8)


@pytest.fixture(scope="session")
def free_ball4():
    return get_ball("free:2", 4)


@pytest.fixture(scope="session")
def surface_ball4():
    return get_ball("surface:2", 4)


@pytest.fixture(scope="session")
def surface_ball6():
    return get_ball("surface:2", 6)
