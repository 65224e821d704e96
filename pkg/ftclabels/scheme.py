"""
Label construction.

The pipeline builds a canonical spanning tree T of G, subdivides every non-tree edge to obtain G′
with spanning tree T′ (so that every original edge is represented by a tree edge σ(e) of T′), and
labels G′:

- every vertex gets its ancestry interval in T′;
- every tree edge of T′ gets the ancestry intervals of its endpoints and, for every hierarchy
  level, the sum of the outdetect labels of the vertices below it.

An original edge carries the label of σ(e).
"""

import logging
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .ancestry import AncestryLabel, ancestry_width, assign_ancestry
from .config import HierarchyMode, SchemeConfig
from .exceptions import LabelMismatchError, UnknownElementError
from .gf2e import GF2Field, field_for_width
from .graph import (
    AuxiliaryGraph,
    Edge,
    EulerCoords,
    Graph,
    RootedTree,
    build_spanning_tree,
    euler_coordinates,
    subdivide,
)
from .outdetect import EdgeLocator, OutdetectSyndrome, RSCodec
from .sparsify import (
    Hierarchy,
    PlanePoint,
    build_hierarchy,
    deterministic_threshold,
    map_edges,
)
from .utils import normalize_edge

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexLabel:
    ancestry: AncestryLabel

    @property
    def position(self) -> int:
        return self.ancestry.start


@dataclass(frozen=True)
class EdgeLabel:
    """
    Label of a tree edge of T′.

    upper, lower:  ancestry labels of the parent and child endpoints.
    syndromes:     per hierarchy level, the aggregated outdetect label of the subtree below the edge.
    """

    upper: AncestryLabel
    lower: AncestryLabel
    syndromes: Tuple[OutdetectSyndrome, ...]


@dataclass(frozen=True)
class SchemeHeader:
    """
    Metadata shared by all labels of one label set.

    n, m:       size of the original graph.
    q:          ancestry field width, ⌈log2(n′ + 1)⌉ for the n′ vertices of the auxiliary graph.
    w:          field width of the outdetect syndromes.
    threshold:  K, the number of decodable edges per level.
    h:          hierarchy depth; edge labels hold h + 1 syndromes.
    c_net:      threshold multiplier (the survival threshold factor in randomized mode).
    """

    n: int
    m: int
    f: int
    q: int
    w: int
    threshold: int
    h: int
    mode: HierarchyMode
    c_net: int
    seed: Optional[int] = None

    @property
    def n_prime(self) -> int:
        return self.n + self.m - (self.n - 1)

    @property
    def vertex_label_bits(self) -> int:
        return 2 * self.q

    @property
    def edge_label_bits(self) -> int:
        return 4 * self.q + (self.h + 1) * 2 * self.threshold * self.w

    @cached_property
    def field(self) -> GF2Field:
        gf = field_for_width(self.w)
        if gf.w != self.w:
            raise LabelMismatchError(f"no shipped field has width {self.w}")
        return gf

    def budget(self, cut_size: int) -> int:
        """Per-query decode threshold for a vertex set whose tree cutset has cut_size edges."""
        if self.mode is HierarchyMode.DETERMINISTIC:
            return min(
                self.threshold, deterministic_threshold(cut_size, self.c_net, self.n_prime)
            )
        return self.threshold

    def locator_check(self, loc: EdgeLocator) -> bool:
        return loc.is_well_formed(self.q, self.n_prime)

    def make_codec(self) -> RSCodec:
        return RSCodec(self.field, validate=self.locator_check)

    def check_vertex_label(self, label: VertexLabel) -> None:
        if not 0 <= label.ancestry.start < label.ancestry.end <= self.n_prime:
            raise LabelMismatchError(
                f"vertex label {label.ancestry} does not belong to a tree on "
                f"{self.n_prime} vertices"
            )

    def check_edge_label(self, label: EdgeLabel) -> None:
        if len(label.syndromes) != self.h + 1:
            raise LabelMismatchError(
                f"edge label holds {len(label.syndromes)} levels; the label set has {self.h + 1}"
            )
        for syndrome in label.syndromes:
            if (syndrome.k, syndrome.w) != (self.threshold, self.w):
                raise LabelMismatchError(
                    f"edge label syndrome has threshold/width {syndrome.k}/{syndrome.w}; the "
                    f"label set uses {self.threshold}/{self.w}"
                )
        upper, lower = label.upper, label.lower
        if not (upper.start < lower.start and lower.end <= upper.end <= self.n_prime):
            raise LabelMismatchError(
                f"edge label endpoints {upper} and {lower} are not a parent and a descendant"
            )


@dataclass(frozen=True)
class LabelSet:
    """
    Everything a query needs: the header, the vertex and edge labels of the original graph, and
    the hierarchy levels (for inspection only).
    """

    header: SchemeHeader
    edges: Tuple[Edge, ...]
    levels: Tuple[Tuple[int, ...], ...]
    vertex_labels: Tuple[VertexLabel, ...]
    edge_labels: Tuple[EdgeLabel, ...]

    @cached_property
    def _edge_indices(self) -> Dict[Edge, int]:
        return {edge: index for index, edge in enumerate(self.edges)}

    @cached_property
    def codec(self) -> RSCodec:
        return self.header.make_codec()

    def edge_index(self, u: int, v: int) -> int:
        try:
            return self._edge_indices[normalize_edge(u, v)]
        except KeyError:
            raise UnknownElementError(f"({u}, {v}) is not an edge of the graph") from None

    def vertex_label(self, v: int) -> VertexLabel:
        if not 0 <= v < self.header.n:
            raise UnknownElementError(
                f"{v} is not a vertex of the graph; vertices are 0..{self.header.n - 1}"
            )
        return self.vertex_labels[v]

    def edge_label(self, u: int, v: int) -> EdgeLabel:
        return self.edge_labels[self.edge_index(u, v)]


@dataclass(frozen=True)
class Construction:
    """All intermediate products of a label construction."""

    graph: Graph
    tree: RootedTree
    aux: AuxiliaryGraph
    coords: EulerCoords
    ancestry: Tuple[AncestryLabel, ...]
    points: Tuple[PlanePoint, ...]
    hierarchy: Hierarchy
    codec: RSCodec
    locators: Dict[int, EdgeLocator]
    vertex_syndromes: Tuple[Tuple[OutdetectSyndrome, ...], ...]
    subtree_syndromes: Tuple[Tuple[OutdetectSyndrome, ...], ...]
    label_set: LabelSet


def subtree_sums(t: RootedTree, values: Sequence[OutdetectSyndrome]) -> List[OutdetectSyndrome]:
    """Sum values over every subtree of t in one bottom-up pass."""
    totals = [value.value for value in values]
    for vertex in reversed(t.order):
        if vertex != t.root:
            totals[t.parent[vertex]] ^= totals[vertex]
    k, w = values[0].k, values[0].w
    return [OutdetectSyndrome(k=k, w=w, value=total) for total in totals]


def construct(g: Graph, config: SchemeConfig) -> Construction:
    """Run the whole labeling pipeline on g and keep every intermediate."""
    start = time.perf_counter()

    tree = build_spanning_tree(g)
    aux = subdivide(g, tree)
    t = aux.t
    n_prime = aux.g.n
    coords = euler_coordinates(t)
    ancestry = assign_ancestry(t)
    q = ancestry_width(n_prime)
    gf = field_for_width(2 * q + 1)

    logger.debug(
        "Built spanning tree and auxiliary graph in %.3fs: n′=%d, %d non-tree edges, q=%d, w=%d",
        time.perf_counter() - start,
        n_prime,
        len(aux.non_tree),
        q,
        gf.w,
    )

    points = tuple(map_edges(coords, aux.non_tree))
    hierarchy = build_hierarchy(points, config, n_prime)
    k = hierarchy.threshold

    header = SchemeHeader(
        n=g.n,
        m=g.m,
        f=config.f,
        q=q,
        w=gf.w,
        threshold=k,
        h=hierarchy.h,
        mode=hierarchy.mode,
        c_net=hierarchy.c_net,
        seed=hierarchy.seed,
    )
    codec = header.make_codec()

    locators = {
        index: EdgeLocator.from_positions(t.preorder[a], t.preorder[b], q)
        for index, (a, b) in aux.non_tree.items()
    }

    stage = time.perf_counter()
    vertex_syndromes = []
    subtree_syndromes = []
    for level in hierarchy.levels:
        labels = codec.vertex_labels(
            n_prime,
            ((aux.non_tree[e][0], aux.non_tree[e][1], locators[e]) for e in level),
            k,
        )
        vertex_syndromes.append(tuple(labels))
        subtree_syndromes.append(tuple(subtree_sums(t, labels)))
    logger.debug(
        "Computed %d levels of outdetect labels in %.3fs",
        len(hierarchy.levels),
        time.perf_counter() - stage,
    )

    edge_labels = tuple(
        EdgeLabel(
            upper=ancestry[parent],
            lower=ancestry[child],
            syndromes=tuple(level[child] for level in subtree_syndromes),
        )
        for parent, child in aux.sigma
    )
    label_set = LabelSet(
        header=header,
        edges=g.edges,
        levels=hierarchy.levels,
        vertex_labels=tuple(VertexLabel(ancestry=ancestry[v]) for v in range(g.n)),
        edge_labels=edge_labels,
    )

    logger.debug(
        "Constructed labels in %.3fs: %d bits per vertex, %d bits per edge",
        time.perf_counter() - start,
        header.vertex_label_bits,
        header.edge_label_bits,
    )

    return Construction(
        graph=g,
        tree=tree,
        aux=aux,
        coords=coords,
        ancestry=ancestry,
        points=points,
        hierarchy=hierarchy,
        codec=codec,
        locators=locators,
        vertex_syndromes=tuple(vertex_syndromes),
        subtree_syndromes=tuple(subtree_syndromes),
        label_set=label_set,
    )


def build_labels(g: Graph, config: SchemeConfig) -> LabelSet:
    """Build the label set of g."""
    return construct(g, config).label_set
