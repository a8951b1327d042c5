import pytest

from nilcohom.deform import kuranishi_series
from nilcohom.model import catalog


@pytest.fixture(scope="session")
def iwasawa():
    return catalog("iwasawa3")


@pytest.fixture(scope="session")
def kt():
    return catalog("kodaira-thurston")


@pytest.fixture(scope="session")
def torus3():
    return catalog("torus3")


@pytest.fixture(scope="session")
def iwasawa_family(iwasawa):
    return kuranishi_series(iwasawa, 4)
