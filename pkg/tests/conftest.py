import itertools

import pytest

from subexpr.coxeter import named_system


@pytest.fixture(scope="session")
def a2():
    return named_system("A2")


@pytest.fixture(scope="session")
def b2():
    return named_system("B2")


@pytest.fixture(scope="session")
def g2():
    return named_system("G2")


@pytest.fixture(scope="session")
def a3():
    return named_system("A3")


def words_up_to(rank, max_len):
    for L in range(max_len + 1):
        yield from itertools.product(range(rank), repeat=L)
