import pytest

from hermitangent import make_field_tower


@pytest.fixture(scope="session")
def t5():
    return make_field_tower(5, 1)


@pytest.fixture(scope="session")
def t7():
    return make_field_tower(7, 1)


@pytest.fixture(scope="session")
def t9():
    return make_field_tower(3, 2)


@pytest.fixture(scope="session")
def t8():
    return make_field_tower(2, 3)


@pytest.fixture(scope="session")
def t2():
    return make_field_tower(2, 1)


@pytest.fixture(scope="session")
def t3():
    return make_field_tower(3, 1)
