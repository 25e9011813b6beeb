import pytest

from ellschub.algebra import DemazureLusztig
from ellschub.field import build_field
from ellschub.theta import ModularParams

_FIELDS = {}


def get_field(type_label, rank, seed=0, count=20):
    key = (type_label, rank, seed, count)
    if key not in _FIELDS:
        _FIELDS[key] = build_field(type_label, rank, seed=seed, count=count)
    return _FIELDS[key]


def get_dl(type_label, rank, **kw):
    F = get_field(type_label, rank)
    key = ("dl", type_label, rank, tuple(sorted(kw.items())))
    if key not in _FIELDS:
        _FIELDS[key] = DemazureLusztig(F, **kw)
    return _FIELDS[key]


@pytest.fixture(scope="session")
def params():
    return ModularParams.build()


@pytest.fixture(scope="session")
def A1():
    return get_field("A", 1)


@pytest.fixture(scope="session")
def A2():
    return get_field("A", 2)


@pytest.fixture(scope="session")
def B2():
    return get_field("B", 2)


@pytest.fixture(scope="session")
def dlA1():
    return get_dl("A", 1)


@pytest.fixture(scope="session")
def dlA2():
    return get_dl("A", 2)


@pytest.fixture(scope="session")
def dlB2():
    return get_dl("B", 2)
