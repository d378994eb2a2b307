import pytest

from sl3braid.braid import parse_braid


@pytest.fixture
def trefoil():
    return parse_braid("b=2; 1,1,1")


@pytest.fixture
def mirror_trefoil():
    return parse_braid("b=2; -1,-1,-1")
