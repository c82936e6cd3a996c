import pytest

from cryoplan.data import DataContext


@pytest.fixture(scope="session")
def data() -> DataContext:
    return DataContext.open()


@pytest.fixture(scope="session")
def materials(data):
    return data.materials


@pytest.fixture(scope="session")
def capacity(data):
    return data.capacity("xld1000s.capacity")
