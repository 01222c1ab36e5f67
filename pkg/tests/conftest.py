import pytest

from freegrowth import (
    CyclicGroup,
    FreeProduct,
    IntegerGroup,
    make_psl2_group,
)


def _int_gen(name):
    return ({"name": name, "element": 1},)


@pytest.fixture(scope="session")
def zz():
    """Z * Z with generators a, b."""
    return FreeProduct(IntegerGroup(_int_gen("a")), IntegerGroup(_int_gen("b")))


@pytest.fixture(scope="session")
def c2c3():
    """C2 * C3 with generators s, t."""
    return make_psl2_group()


@pytest.fixture(scope="session")
def c2c2():
    """C2 * C2 (infinite dihedral) with generators x, y."""
    return FreeProduct(
        CyclicGroup(2, ({"name": "x", "element": 1},)),
        CyclicGroup(2, ({"name": "y", "element": 1},)),
    )


@pytest.fixture(scope="session")
def zz_c2(zz):
    """(Z * Z) * C2, a nested free product."""
    return FreeProduct(zz, CyclicGroup(2, ({"name": "c", "element": 1},)))
