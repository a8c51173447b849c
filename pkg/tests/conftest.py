import pytest

from oconform.context import build_graph
from oconform.fixtures import (load_flower_l1, load_l1, load_ocpn1,
                               load_restricted)


@pytest.fixture(scope="session")
def l1():
    return load_l1()


@pytest.fixture(scope="session")
def ocpn1():
    return load_ocpn1()


@pytest.fixture(scope="session")
def flower_l1():
    return load_flower_l1()


@pytest.fixture(scope="session")
def restricted():
    return load_restricted()


@pytest.fixture(scope="session")
def l1_graph(l1):
    return build_graph(l1)
