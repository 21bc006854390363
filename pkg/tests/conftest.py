import pytest

from mordell_basis.family import FamilyCurve, enumerate_family


@pytest.fixture(scope="session")
def fam53():
    return FamilyCurve.build(5, 3)


@pytest.fixture(scope="session")
def fam73():
    return FamilyCurve.build(7, 3)


@pytest.fixture(scope="session")
def grid_members():
    """Family members with a, b <= 25."""
    return [e.family for e in enumerate_family(25, 25) if e.family is not None]
