import pytest

from soergel.coxeter import CoxeterGroup


@pytest.fixture(scope="session")
def a1():
    return CoxeterGroup("A1")


@pytest.fixture(scope="session")
def a2():
    return CoxeterGroup("A2")


@pytest.fixture(scope="session")
def a3():
    return CoxeterGroup("A3")
