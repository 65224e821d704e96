"""
Graph representation, canonical spanning trees, Euler-tour coordinates, the subdivision transform to
the auxiliary graph, and the brute-force connectivity oracle.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from os import PathLike
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import networkx as nx

from .exceptions import GraphParseError, GraphValidationError, UnknownElementError
from .utils import normalize_edge

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """
    Simple, connected, undirected graph on the vertices 0..n-1.

    Edges are stored as (smaller, larger) pairs; the position of an edge in `edges` is its edge
    index, which is how labels and fault sets refer to it.
    """

    n: int
    edges: Tuple[Edge, ...]

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """Neighbors of every vertex, sorted by vertex index."""
        neighbors: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            neighbors[u].append(v)
            neighbors[v].append(u)
        return tuple(tuple(sorted(n)) for n in neighbors)

    @cached_property
    def _edge_indices(self) -> Dict[Edge, int]:
        return {edge: index for index, edge in enumerate(self.edges)}

    def edge_index(self, u: int, v: int) -> int:
        """Resolve an unordered vertex pair to its edge index."""
        try:
            return self._edge_indices[normalize_edge(u, v)]
        except KeyError:
            raise UnknownElementError(f"({u}, {v}) is not an edge of the graph") from None

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self._edge_indices

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class RootedTree:
    """
    Rooted spanning tree.

    parent:    parent of every vertex; the root is its own parent.
    children:  ordered children of every vertex.
    preorder:  preorder index of every vertex, following the children order.
    order:     vertices listed in preorder (the inverse of `preorder`).
    size:      number of vertices in the subtree of every vertex.
    """

    root: int
    parent: Tuple[int, ...]
    children: Tuple[Tuple[int, ...], ...]
    preorder: Tuple[int, ...] = field(repr=False)
    order: Tuple[int, ...] = field(repr=False)
    size: Tuple[int, ...] = field(repr=False)

    @classmethod
    def from_children(
        cls, root: int, parent: Sequence[int], children: Sequence[Sequence[int]]
    ) -> "RootedTree":
        """Build a tree from parent pointers and ordered children, computing preorder and sizes."""
        n = len(parent)
        order: List[int] = []
        stack = [root]
        while stack:
            vertex = stack.pop()
            order.append(vertex)
            stack.extend(reversed(children[vertex]))
        assert len(order) == n, "every vertex must be reachable from the root"

        preorder = [0] * n
        for index, vertex in enumerate(order):
            preorder[vertex] = index

        size = [1] * n
        for vertex in reversed(order):
            if vertex != root:
                size[parent[vertex]] += size[vertex]

        return cls(
            root=root,
            parent=tuple(parent),
            children=tuple(tuple(c) for c in children),
            preorder=tuple(preorder),
            order=tuple(order),
            size=tuple(size),
        )

    @property
    def n(self) -> int:
        return len(self.parent)

    def tree_edges(self) -> Iterable[Edge]:
        """Yield (parent, child) pairs in preorder of the child."""
        for vertex in self.order:
            if vertex != self.root:
                yield self.parent[vertex], vertex

    def is_ancestor(self, u: int, v: int) -> bool:
        """Return whether u is a proper ancestor of v, by walking parent pointers."""
        while v != self.root:
            v = self.parent[v]
            if v == u:
                return True
        return False


@dataclass(frozen=True)
class EulerCoords:
    """
    Euler-tour coordinates of a rooted tree.

    c[v]:     1-based tour position of the directed edge parent(v) -> v; 0 for the root.
    exit[v]:  tour position of the directed edge v -> parent(v); 2n - 1 (one past the tour) for the
              root.
    """

    c: Tuple[int, ...]
    exit: Tuple[int, ...]


@dataclass(frozen=True)
class AuxiliaryGraph:
    """
    The subdivided graph G′ with its spanning tree T′.

    Every original non-tree edge (u, v), u < v, is replaced by the tree edge (u, m_e) and the
    non-tree edge (m_e, v), where m_e is a new vertex.

    sigma:     original edge index -> (parent, child) tree edge of T′ that stands for it.
    midpoint:  original non-tree edge index -> its subdivision vertex.
    non_tree:  the non-tree edges of G′ as (m_e, v) pairs, keyed by original edge index.
    """

    g: Graph
    t: RootedTree
    sigma: Tuple[Edge, ...]
    midpoint: Mapping[int, int]
    non_tree: Mapping[int, Edge]

    @property
    def n_original(self) -> int:
        return self.g.n - len(self.midpoint)


def load_graph(text: str) -> Graph:
    """
    Parse and validate an edge-list document.

    The first non-comment line holds the vertex count n; every following line holds one edge
    "u v" with 0 <= u, v < n. Lines starting with '#' are comments and blank lines are skipped.
    """
    n: Union[int, None] = None
    edges: List[Edge] = []
    first_seen: Dict[Edge, int] = {}

    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue

        tokens = line.split()
        try:
            values = [int(token) for token in tokens]
        except ValueError:
            raise GraphParseError(line_number, f"expected integers, got {line!r}") from None

        if n is None:
            if len(values) != 1:
                raise GraphParseError(
                    line_number, "first line must hold the vertex count only"
                )
            n = values[0]
            if n < 1:
                raise GraphParseError(line_number, "vertex count must be at least 1")
            continue

        if len(values) != 2:
            raise GraphParseError(
                line_number, f"expected two vertices 'u v', got {line!r}"
            )
        u, v = values
        if not (0 <= u < n and 0 <= v < n):
            raise GraphValidationError(
                f"line {line_number}: vertex out of range in edge ({u}, {v}); n = {n}"
            )
        if u == v:
            raise GraphValidationError(f"line {line_number}: self-loop at vertex {u}")
        edge = normalize_edge(u, v)
        if edge in first_seen:
            raise GraphValidationError(
                f"line {line_number}: duplicate edge ({u}, {v}), first given on line "
                f"{first_seen[edge]}"
            )
        first_seen[edge] = line_number
        edges.append(edge)

    if n is None:
        raise GraphParseError(0, "document is empty; expected the vertex count")

    graph = Graph(n=n, edges=tuple(edges))
    _check_connected(graph)

    logger.debug("Loaded graph with n=%d, m=%d", graph.n, graph.m)

    return graph


def load_graph_file(path: Union[str, PathLike]) -> Graph:
    """Read and parse an edge-list document from a file."""
    try:
        with open(path, encoding="utf-8") as file_:
            text = file_.read()
    except OSError as error:
        raise GraphValidationError(f"unable to read graph file: {error}") from error
    except UnicodeDecodeError as error:
        raise GraphValidationError(f"graph file is not valid UTF-8: {error}") from error
    return load_graph(text)


def dump_graph(graph: Graph) -> str:
    """Serialize a graph to the edge-list document format."""
    return "\n".join([str(graph.n), *(f"{u} {v}" for u, v in graph.edges)]) + "\n"


def _check_connected(graph: Graph) -> None:
    """Raise a GraphValidationError naming a component that is not reachable from vertex 0."""
    components = sorted(
        (sorted(c) for c in nx.connected_components(graph.to_networkx())),
        key=lambda c: c[0],
    )
    if len(components) > 1:
        stray = components[1]
        shown = ", ".join(str(v) for v in stray[:10]) + (", ..." if len(stray) > 10 else "")
        raise GraphValidationError(
            f"graph is disconnected: {len(components)} components; the component "
            f"{{{shown}}} is not reachable from vertex 0"
        )


def build_spanning_tree(g: Graph, root: int = 0) -> RootedTree:
    """
    Build the canonical depth-first spanning tree of g.

    The search always continues with the lowest-index unvisited neighbor, and children are ordered
    by discovery, which is increasing neighbor index.
    """
    parent = [-1] * g.n
    children: List[List[int]] = [[] for _ in range(g.n)]
    parent[root] = root

    # Iterative DFS with explicit neighbor cursors, equivalent to the recursive formulation
    cursor = [0] * g.n
    stack = [root]
    while stack:
        vertex = stack[-1]
        neighbors = g.adjacency[vertex]
        while cursor[vertex] < len(neighbors) and parent[neighbors[cursor[vertex]]] != -1:
            cursor[vertex] += 1
        if cursor[vertex] == len(neighbors):
            stack.pop()
            continue
        child = neighbors[cursor[vertex]]
        parent[child] = vertex
        children[vertex].append(child)
        stack.append(child)

    return RootedTree.from_children(root, parent, children)


def subdivide(g: Graph, t: RootedTree) -> AuxiliaryGraph:
    """
    Subdivide every non-tree edge of g.

    Subdivision vertices are numbered n, n+1, ... in increasing original edge index, and become the
    last children of their tree-side endpoint in T′, in that order.
    """
    parent = list(t.parent)
    children = [list(c) for c in t.children]
    sigma: List[Edge] = []
    midpoint: Dict[int, int] = {}
    non_tree: Dict[int, Edge] = {}
    aux_edges: List[Edge] = []

    for index, (u, v) in enumerate(g.edges):
        if t.parent[v] == u and v != t.root:
            sigma.append((u, v))
            aux_edges.append((u, v))
        elif t.parent[u] == v and u != t.root:
            sigma.append((v, u))
            aux_edges.append((u, v))
        else:
            m_e = len(parent)
            parent.append(u)
            children.append([])
            children[u].append(m_e)
            sigma.append((u, m_e))
            midpoint[index] = m_e
            non_tree[index] = (m_e, v)
            aux_edges.append((u, m_e))
            aux_edges.append(normalize_edge(m_e, v))

    aux_graph = Graph(n=len(parent), edges=tuple(aux_edges))
    aux_tree = RootedTree.from_children(t.root, parent, children)

    logger.debug(
        "Subdivided %d non-tree edges; auxiliary graph has n′=%d", len(midpoint), aux_graph.n
    )

    return AuxiliaryGraph(
        g=aux_graph,
        t=aux_tree,
        sigma=tuple(sigma),
        midpoint=midpoint,
        non_tree=non_tree,
    )


def euler_coordinates(t: RootedTree) -> EulerCoords:
    """Number the directed edges of the Euler tour of t, following the children order of t."""
    c = [0] * t.n
    exit_ = [0] * t.n
    exit_[t.root] = 2 * t.n - 1

    position = 0
    stack: List[Tuple[int, int]] = [(t.root, 0)]
    while stack:
        vertex, next_child = stack[-1]
        if next_child < len(t.children[vertex]):
            stack[-1] = (vertex, next_child + 1)
            child = t.children[vertex][next_child]
            position += 1
            c[child] = position
            stack.append((child, 0))
        else:
            stack.pop()
            if vertex != t.root:
                position += 1
                exit_[vertex] = position

    return EulerCoords(c=tuple(c), exit=tuple(exit_))


def oracle_connected(g: Graph, s: int, t: int, f_set: Iterable[Edge]) -> bool:
    """Return whether s and t are connected in g once the edges of f_set are removed."""
    if s == t:
        return True
    graph = g.to_networkx()
    graph.remove_edges_from(normalize_edge(u, v) for u, v in f_set)
    return bool(nx.has_path(graph, s, t))
