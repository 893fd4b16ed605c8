import pytest

from eigenroots import bundled_operator


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("eigencache"))


@pytest.fixture(scope="session")
def laguerre():
    return bundled_operator("laguerre")


@pytest.fixture(scope="session")
def hermite():
    return bundled_operator("hermite")


@pytest.fixture(scope="session")
def t1():
    return bundled_operator("t1")


@pytest.fixture(scope="session")
def t2():
    return bundled_operator("t2")


@pytest.fixture(scope="session")
def t3():
    return bundled_operator("t3")


@pytest.fixture(scope="session")
def t4():
    return bundled_operator("t4")


@pytest.fixture(scope="session")
def t5():
    return bundled_operator("t5")


@pytest.fixture(scope="session")
def t6():
    return bundled_operator("t6")


@pytest.fixture(scope="session")
def t7():
    return bundled_operator("t7")


@pytest.fixture(scope="session")
def singular3():
    return bundled_operator("singular3")
