from pathlib import Path

import pytest

from src.catalog import PlaneLibrary
from src.errors import MissingPlaneData
from src.geometry import hermitian_points, pg2
from src.incidence import IncidenceStructure
from src.unitals import Unital

ROOT = Path(__file__).resolve().parents[1]


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def fano():
    return pg2(2)


@pytest.fixture(scope="session")
def pg3():
    return pg2(3)


@pytest.fixture(scope="session")
def pg4():
    return pg2(4)


@pytest.fixture(scope="session")
def herm4(pg4):
    """The 9-point Hermitian unital of PG(2,4)."""
    return Unital.of(pg4, hermitian_points(4))


@pytest.fixture(scope="session")
def affine3(herm4):
    from src.unitals import design_from_unital

    return design_from_unital(herm4)


@pytest.fixture
def cyclic_triples():
    """7 points, blocks {i, i+1, i+2}: every point on 3 blocks, but not a plane."""
    return IncidenceStructure.from_blocks(7, [{i, (i + 1) % 7, (i + 2) % 7} for i in range(7)])


@pytest.fixture(scope="session")
def library():
    return PlaneLibrary(ROOT / "state" / "planes")


@pytest.fixture(scope="session")
def require_plane(library):
    def get(name):
        try:
            return library.get(name)
        except MissingPlaneData as ex:
            pytest.skip(str(ex))
    return get


@pytest.fixture(scope="session")
def pg16():
    return pg2(16)


@pytest.fixture(scope="session")
def herm16(pg16):
    return Unital.of(pg16, hermitian_points(16))
