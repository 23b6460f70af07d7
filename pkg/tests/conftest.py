import pytest

from tempmod import build_temporal_graph


@pytest.fixture
def p3():
    """Three vertices over two timesteps: edge 01 active both times, edge 12 only at t=1."""
    return build_temporal_graph(3, 2, [(0, 1, 1), (0, 1, 2), (1, 2, 1)])


@pytest.fixture
def k2():
    return build_temporal_graph(2, 1, [(0, 1, 1)])
