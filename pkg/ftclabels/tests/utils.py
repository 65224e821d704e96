"""Test utilities"""

import random
from itertools import combinations
from typing import FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx
from funcy import pairwise

from ..graph import AuxiliaryGraph, Edge, Graph
from ..utils import normalize_edge

K3 = Graph(n=3, edges=((0, 1), (0, 2), (1, 2)))

TRIANGLE_RING = Graph(
    n=9,
    edges=(
        (0, 1),
        (1, 2),
        (0, 2),
        (3, 4),
        (4, 5),
        (3, 5),
        (6, 7),
        (7, 8),
        (6, 8),
        (2, 3),
        (5, 6),
        (0, 8),
    ),
)


def random_connected_graph(rng: random.Random, n: int, m: int) -> Graph:
    """
    Return a random simple connected graph with n vertices and min(m, n(n-1)/2) edges, in random
    edge order.
    """
    order = list(range(n))
    rng.shuffle(order)
    edges = {
        normalize_edge(v, order[rng.randrange(i)]) for i, v in enumerate(order) if i > 0
    }
    others = [pair for pair in combinations(range(n), 2) if pair not in edges]
    rng.shuffle(others)
    edges.update(others[: max(0, m - len(edges))])
    ordered = sorted(edges)
    rng.shuffle(ordered)
    graph = Graph(n=n, edges=tuple(ordered))
    assert nx.is_connected(graph.to_networkx())
    return graph


def path_graph(n: int) -> Graph:
    return Graph(n=n, edges=tuple(pairwise(range(n))))


def random_faults(rng: random.Random, graph: Graph, f: int) -> List[Edge]:
    return rng.sample(graph.edges, rng.randint(1, min(f, graph.m)))


def boundary(edges: Iterable[Tuple[int, int]], s: FrozenSet[int]) -> FrozenSet[int]:
    """Indices of the edges with exactly one endpoint in s."""
    return frozenset(i for i, (a, b) in enumerate(edges) if (a in s) != (b in s))


def non_tree_boundary(aux: AuxiliaryGraph, s: FrozenSet[int]) -> FrozenSet[int]:
    return frozenset(
        index for index, (a, b) in aux.non_tree.items() if (a in s) != (b in s)
    )


def subsets(items: Sequence[int], max_size: int) -> Iterable[Tuple[int, ...]]:
    for size in range(1, max_size + 1):
        yield from combinations(items, size)
