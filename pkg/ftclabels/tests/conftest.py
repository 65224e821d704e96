"""ftclabels test fixtures"""

import random
from typing import List, Tuple

import pytest
from _pytest.fixtures import FixtureRequest

from ..config import SchemeConfig, make_config
from ..graph import Graph
from ..scheme import Construction, construct
from .utils import K3, TRIANGLE_RING, random_connected_graph


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture(scope="session")
def k3_construction() -> Construction:
    return construct(K3, make_config(f=1))


@pytest.fixture(scope="session")
def ring_construction() -> Construction:
    return construct(TRIANGLE_RING, make_config(f=3))


@pytest.fixture(scope="session")
def random_graphs() -> List[Graph]:
    """Small random connected graphs, from trees to dense graphs."""
    rng = random.Random(7)
    shapes = [(5, 4), (6, 9), (8, 12), (10, 20), (12, 30), (15, 25), (18, 40), (20, 55)]
    return [random_connected_graph(rng, n, m) for n, m in shapes]


@pytest.fixture(
    scope="session",
    params=[
        {"f": 1},
        {"f": 2},
        {"f": 3},
        {"f": 2, "netfind_eps": 2},
        {"f": 2, "mode": "randomized", "seed": 11},
        {"f": 3, "mode": "randomized", "seed": 12},
    ],
    ids=["f=1", "f=2", "f=3", "f=2 dense nets", "randomized f=2", "randomized f=3"],
)
def scheme_config(request: FixtureRequest) -> SchemeConfig:
    """Parametrized fixture to ensure that queries are tested under every hierarchy setup."""
    return make_config(**request.param)


@pytest.fixture(scope="session")
def constructions(
    random_graphs: List[Graph], scheme_config: SchemeConfig
) -> List[Tuple[Graph, Construction]]:
    return [(graph, construct(graph, scheme_config)) for graph in random_graphs]
