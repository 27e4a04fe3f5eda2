import pytest

import linkwalk as lw


@pytest.fixture
def single_edge():
    return lw.Network(("a", "b"), frozenset({(0, 1)}))


@pytest.fixture
def path3():
    return lw.Network(("a", "b", "c"), frozenset({(0, 1), (1, 2)}))


@pytest.fixture
def triangle():
    return lw.Network(("a", "b", "c"), frozenset({(0, 1), (0, 2), (1, 2)}))


@pytest.fixture
def star4():
    return lw.Network(("hub", "x", "y", "z"), frozenset({(0, 1), (0, 2), (0, 3)}))
