import pytest

from mackey_kernel import groups


@pytest.fixture(scope="session")
def C2():
    return groups.named_group("C2")


@pytest.fixture(scope="session")
def C3():
    return groups.named_group("C3")


@pytest.fixture(scope="session")
def C4():
    return groups.named_group("C4")


@pytest.fixture(scope="session")
def V4():
    return groups.named_group("C2xC2")


@pytest.fixture(scope="session")
def S3():
    return groups.named_group("S3")


@pytest.fixture(scope="session")
def triv():
    return groups.named_group("1")


def order2_subgroup(G):
    return next(s for s in groups.all_subgroups(G) if len(s) == 2)


def order3_subgroup(G):
    return next(s for s in groups.all_subgroups(G) if len(s) == 3)
