import pytest
from hypothesis import settings

from toricstab.fan import Fan, standard_fan

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")


@pytest.fixture
def p2():
    return standard_fan("P", 2)


@pytest.fixture
def box():
    return standard_fan("box", 2)


@pytest.fixture
def p3():
    return standard_fan("P", 3)


@pytest.fixture
def box3():
    return standard_fan("box", 3)


def half_plane():
    return Fan([(1, 0), (0, 1)], [[0, 1]], 2)
