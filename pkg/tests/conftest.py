import pytest

from neutralkahler import flat_geometry, sphere_geometry


@pytest.fixture(scope="session")
def flat():
    return flat_geometry()


@pytest.fixture(scope="session")
def sphere():
    return sphere_geometry()
