import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ktreesub import enumerate_partitions, enumerate_ktree_complex


@pytest.fixture(scope="session")
def pk31():
    return enumerate_partitions(3, 1)


@pytest.fixture(scope="session")
def pk41():
    return enumerate_partitions(4, 1)


@pytest.fixture(scope="session")
def pk51():
    return enumerate_partitions(5, 1)


@pytest.fixture(scope="session")
def pk52():
    return enumerate_partitions(5, 2)


@pytest.fixture(scope="session")
def pk72():
    return enumerate_partitions(7, 2)


@pytest.fixture(scope="session")
def pk73():
    return enumerate_partitions(7, 3)


@pytest.fixture(scope="session")
def t14():
    return enumerate_ktree_complex(4, 1)


@pytest.fixture(scope="session")
def t24():
    return enumerate_ktree_complex(4, 2)


@pytest.fixture(scope="session")
def delta41(pk41):
    return pk41.poset.order_complex()


@pytest.fixture(scope="session")
def delta72(pk72):
    return pk72.poset.order_complex()
