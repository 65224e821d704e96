"""Test graph parsing, spanning trees, subdivision and Euler-tour coordinates"""

import random
from pathlib import Path
from typing import List

import pytest

from ..exceptions import GraphParseError, GraphValidationError, UnknownElementError
from ..graph import (
    Graph,
    build_spanning_tree,
    dump_graph,
    euler_coordinates,
    load_graph,
    load_graph_file,
    oracle_connected,
    subdivide,
)
from .utils import K3, random_connected_graph


def test_load_graph() -> None:
    graph = load_graph("# a triangle\n3\n\n0 1\n2 0  \n# chord\n1 2\n")

    assert graph == Graph(n=3, edges=((0, 1), (0, 2), (1, 2)))
    assert graph.edge_index(2, 0) == 1
    assert load_graph(dump_graph(graph)) == graph


def test_single_vertex() -> None:
    graph = load_graph("1\n")

    assert (graph.n, graph.m) == (1, 0)


@pytest.mark.parametrize(
    argnames="document,error_type,message",
    argvalues=(
        argvalues := [
            ("", GraphParseError, "document is empty"),
            ("3 4\n", GraphParseError, "line 1: first line must hold the vertex count"),
            ("0\n", GraphParseError, "line 1: vertex count must be at least 1"),
            ("3\n0 1\n1 x\n", GraphParseError, "line 3: expected integers"),
            ("3\n0 1 2\n", GraphParseError, "line 2: expected two vertices"),
            ("3\n0 3\n", GraphValidationError, "line 2: vertex out of range"),
            ("3\n1 1\n", GraphValidationError, "line 2: self-loop at vertex 1"),
            ("3\n0 1\n1 2\n# c\n1 0\n", GraphValidationError, "line 5: duplicate edge"),
            ("4\n0 1\n2 3\n", GraphValidationError, "graph is disconnected"),
        ]
    ),
    ids=[
        "empty",
        "bad header",
        "zero vertices",
        "non-integer",
        "three tokens",
        "out of range",
        "self-loop",
        "duplicate",
        "disconnected",
    ],
)
def test_load_graph_errors(document: str, error_type: type, message: str) -> None:
    with pytest.raises(error_type) as exc_info:
        load_graph(document)

    assert message in str(exc_info.value)


def test_disconnected_error_names_component() -> None:
    with pytest.raises(GraphValidationError) as exc_info:
        load_graph("5\n0 1\n1 2\n3 4\n")

    assert "{3, 4}" in str(exc_info.value)


def test_edge_index_non_edge() -> None:
    with pytest.raises(UnknownElementError):
        K3.edge_index(0, 0)


def test_spanning_tree_k3() -> None:
    tree = build_spanning_tree(K3)

    assert tree.parent == (0, 0, 1)
    assert tree.children == ((1,), (2,), ())
    assert list(tree.tree_edges()) == [(0, 1), (1, 2)]
    assert tree.is_ancestor(0, 2)
    assert not tree.is_ancestor(2, 0)


def test_spanning_tree_is_deterministic(rng: random.Random) -> None:
    graph = random_connected_graph(rng, 30, 80)

    first, second = build_spanning_tree(graph), build_spanning_tree(graph)

    assert first == second
    assert sorted(first.order) == list(range(30))
    assert first.size[first.root] == 30


def test_subdivide_k3() -> None:
    aux = subdivide(K3, build_spanning_tree(K3))

    assert aux.g.n == 4
    assert aux.n_original == 3
    assert aux.midpoint == {1: 3}
    assert aux.non_tree == {1: (3, 2)}
    assert aux.sigma == ((0, 1), (0, 3), (1, 2))
    assert aux.t.children[0] == (1, 3)
    assert aux.t.preorder == (0, 1, 2, 3)


def test_subdivide_keeps_connectivity(rng: random.Random) -> None:
    graph = random_connected_graph(rng, 15, 40)
    aux = subdivide(graph, build_spanning_tree(graph))

    assert aux.g.n == graph.m + 1
    assert aux.g.m == graph.m + len(aux.midpoint)
    for (u, v), (parent, child) in zip(graph.edges, aux.sigma):
        assert aux.t.parent[child] == parent
        assert parent in (u, v)


def test_subdivision_preserves_fault_connectivity(rng: random.Random) -> None:
    """Removing F from G separates the same pairs as removing the stand-in tree edges from G′"""
    graph = random_connected_graph(rng, 12, 24)
    aux = subdivide(graph, build_spanning_tree(graph))

    for _ in range(30):
        indices = rng.sample(range(graph.m), rng.randint(1, 4))
        faults = [graph.edges[i] for i in indices]
        stand_ins = [aux.sigma[i] for i in indices]
        assert all(aux.g.has_edge(*edge) for edge in stand_ins)

        for s in range(graph.n):
            for t in range(s + 1, graph.n):
                assert oracle_connected(graph, s, t, faults) == oracle_connected(
                    aux.g, s, t, stand_ins
                ), (faults, s, t)


def test_load_graph_file_rejects_undecodable_bytes(tmp_path: Path) -> None:
    path = tmp_path / "graph.txt"
    path.write_bytes(b"2\n0 1\n\xff\n")

    with pytest.raises(GraphValidationError, match="not valid UTF-8"):
        load_graph_file(path)


def test_euler_coordinates_k3() -> None:
    aux = subdivide(K3, build_spanning_tree(K3))

    coords = euler_coordinates(aux.t)

    assert coords.c == (0, 1, 2, 5)
    assert coords.exit == (7, 4, 3, 6)


def test_euler_exit_formula(rng: random.Random) -> None:
    graph = random_connected_graph(rng, 25, 60)
    t = subdivide(graph, build_spanning_tree(graph)).t

    coords = euler_coordinates(t)

    positions: List[int] = []
    for v in range(t.n):
        if v != t.root:
            assert coords.exit[v] == coords.c[v] + 2 * t.size[v] - 1
            positions.extend((coords.c[v], coords.exit[v]))
    assert sorted(positions) == list(range(1, 2 * t.n - 1))


@pytest.mark.parametrize(
    argnames="s,t,faults,expected",
    argvalues=[
        (1, 2, [(0, 1)], True),
        (1, 2, [(0, 1), (1, 2)], False),
        (2, 2, [(0, 2), (1, 2)], True),
        (0, 1, [], True),
    ],
    ids=["one fault", "isolated", "same vertex", "no faults"],
)
def test_oracle_connected(s: int, t: int, faults: List, expected: bool) -> None:
    assert oracle_connected(K3, s, t, faults) is expected
