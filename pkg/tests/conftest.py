import pytest
from hypothesis import settings

from kstab.fixtures import load_fixture

settings.register_profile("kstab", derandomize=True)
settings.load_profile("kstab")


@pytest.fixture(scope="session")
def cp1():
    return load_fixture("cp1")


@pytest.fixture(scope="session")
def blp2():
    return load_fixture("blp2")


@pytest.fixture(scope="session")
def simplex2():
    return load_fixture("simplex2")
