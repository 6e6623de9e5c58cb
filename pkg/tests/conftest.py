import random

import pytest

from app.services.config import get_settings
from app.services.cyclo import cyclotomic_field
from app.services.database import get_engine
from app.services.groups import catalog, named_group


@pytest.fixture(scope="session")
def a3():
    return named_group("A3")


@pytest.fixture(scope="session")
def s3():
    return named_group("S3")


@pytest.fixture(scope="session")
def c4():
    return named_group("C4")


@pytest.fixture(scope="session")
def trivial3():
    return named_group("trivial3")


@pytest.fixture(scope="session")
def f3():
    return cyclotomic_field(3)


@pytest.fixture(scope="session")
def small_catalog():
    """Catalog groups on at most 4 points"""
    return catalog(4)


@pytest.fixture(scope="session")
def catalog5():
    return catalog(5)


@pytest.fixture
def rng():
    return random.Random(20111)


@pytest.fixture
def temp_database(tmp_path, monkeypatch):
    """Point DATABASE_URL at a throwaway SQLite file"""
    monkeypatch.setenv("DATABASE_URL", f"sqlite:///{tmp_path / 'bench.db'}")
    get_settings.cache_clear()
    get_engine.cache_clear()
    yield
    get_settings.cache_clear()
    get_engine.cache_clear()
