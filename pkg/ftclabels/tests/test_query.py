"""Test connectivity queries"""

import random
from typing import List, Tuple, Type

import pytest

from ..config import HierarchyMode, make_config
from ..exceptions import (
    DecoderOverflowError,
    FaultBudgetError,
    FaultSetError,
    LabelMismatchError,
    UnknownElementError,
)
from ..fragments import DisjointSet, build_fragment_table
from ..gf2e import field_for_width
from ..graph import Graph, oracle_connected
from ..outdetect import EdgeLocator, OutdetectSyndrome, RSCodec
from ..query import (
    QueryEngine,
    QueryTrace,
    connected,
    outdetect_query,
    query_basic,
)
from ..scheme import Construction, SchemeHeader, build_labels
from ..utils import popcount
from .utils import K3, TRIANGLE_RING, path_graph, random_faults, subsets

ENGINES = list(QueryEngine)


@pytest.mark.parametrize("engine", ENGINES, ids=[engine.value for engine in ENGINES])
@pytest.mark.parametrize(
    argnames="s,t,faults,expected",
    argvalues=(
        argvalues := [
            (1, 2, [(0, 1)], True),
            (1, 2, [(0, 1), (1, 2)], False),
            (0, 2, [(0, 1), (1, 2)], True),
            (0, 1, [(0, 2), (1, 2)], True),
            (2, 2, [(0, 2), (1, 2)], True),
            (0, 1, [], True),
        ]
    ),
    ids=[f"{s}-{t} minus {faults}" for s, t, faults, _ in argvalues],
)
def test_k3_queries(
    engine: QueryEngine, s: int, t: int, faults: List[Tuple[int, int]], expected: bool
) -> None:
    label_set = build_labels(K3, make_config(f=2))

    assert connected(label_set, s, t, faults, engine) is expected


@pytest.mark.parametrize("engine", ENGINES, ids=[engine.value for engine in ENGINES])
def test_triangle_ring_cut(engine: QueryEngine, ring_construction: Construction) -> None:
    label_set = ring_construction.label_set
    faults = [(2, 3), (5, 6), (0, 8)]

    assert not connected(label_set, 0, 4, faults, engine)
    assert not connected(label_set, 0, 7, faults, engine)
    assert not connected(label_set, 3, 8, faults, engine)
    assert connected(label_set, 0, 2, faults, engine)
    assert connected(label_set, 3, 5, faults, engine)
    assert not connected(label_set, 0, 4, faults[:2], engine)
    assert connected(label_set, 0, 7, faults[:2], engine)


def test_triangle_ring_exhaustive(ring_construction: Construction) -> None:
    """Every fault set of up to three edges, from vertex 0 to a vertex in every triangle"""
    label_set = ring_construction.label_set
    edges = TRIANGLE_RING.edges

    for fault_indices in subsets(range(len(edges)), 3):
        faults = [edges[i] for i in fault_indices]
        for t in (2, 4, 7):
            expected = oracle_connected(TRIANGLE_RING, 0, t, faults)
            for engine in ENGINES:
                assert connected(label_set, 0, t, faults, engine) is expected, (faults, t)


def test_random_queries_match_oracle(
    constructions: List[Tuple[Graph, Construction]], rng: random.Random
) -> None:
    for graph, construction in constructions:
        label_set = construction.label_set
        f = label_set.header.f
        for _ in range(25):
            s, t = rng.randrange(graph.n), rng.randrange(graph.n)
            faults = random_faults(rng, graph, f)
            expected = oracle_connected(graph, s, t, faults)
            for engine in ENGINES:
                assert connected(label_set, s, t, faults, engine) is expected, (
                    graph,
                    s,
                    t,
                    faults,
                    engine,
                )


def test_vertex_isolation(constructions: List[Tuple[Graph, Construction]]) -> None:
    """Removing every edge at a low-degree vertex separates it from the rest"""
    for graph, construction in constructions:
        label_set = construction.label_set
        f = label_set.header.f
        vertex = min(range(graph.n), key=lambda v: len(graph.adjacency[v]))
        incident = [(vertex, u) for u in graph.adjacency[vertex]]
        if len(incident) > f:
            continue
        other = (vertex + 1) % graph.n
        for engine in ENGINES:
            assert not connected(label_set, vertex, other, incident, engine)


def test_merge_and_discard_bounds(
    constructions: List[Tuple[Graph, Construction]], rng: random.Random
) -> None:
    for graph, construction in constructions:
        label_set = construction.label_set
        for _ in range(10):
            s, t = rng.randrange(graph.n), rng.randrange(graph.n)
            faults = random_faults(rng, graph, label_set.header.f)

            fast = QueryTrace()
            connected(label_set, s, t, faults, QueryEngine.FAST, fast)
            basic = QueryTrace()
            connected(label_set, s, t, faults, QueryEngine.BASIC, basic)

            assert fast.merges <= len(faults)
            assert fast.merges + fast.discards <= len(faults) + 1
            assert basic.merges <= len(faults)
            assert len(fast.budgets) <= fast.merges + fast.discards + 1
            assert fast.heap_ops <= 2 * len(faults)


def test_component_cutsets_are_fault_boundaries(
    constructions: List[Tuple[Graph, Construction]], rng: random.Random
) -> None:
    """The tree edges leaving every queried vertex set are exactly the faults in its cutset mask"""
    for graph, construction in constructions:
        label_set = construction.label_set
        tree = construction.aux.t
        for _ in range(8):
            s, t = rng.randrange(graph.n), rng.randrange(graph.n)
            faults = random_faults(rng, graph, label_set.header.f)
            table = build_fragment_table(
                label_set.header,
                [label_set.edge_label(u, v) for u, v in faults],
                label_set.vertex_label(s),
                label_set.vertex_label(t),
            )
            fragment_of = [table.locate(tree.preorder[v]) for v in range(tree.n)]

            for engine in ENGINES:
                trace = QueryTrace()
                connected(label_set, s, t, faults, engine, trace)

                for fragments, mask in trace.components:
                    leaving = {
                        tree.preorder[v]
                        for v in range(tree.n)
                        if tree.parent[v] != v
                        and (fragment_of[v] in fragments)
                        != (fragment_of[tree.parent[v]] in fragments)
                    }
                    assert leaving == {
                        start for i, (start, _) in enumerate(table.intervals) if mask >> i & 1
                    }


def test_budgets_adapt_to_fault_count() -> None:
    """A label set built for many faults decodes small cuts against a smaller threshold"""
    graph = Graph(n=6, edges=((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)))
    label_set = build_labels(graph, make_config(f=8))
    header = label_set.header
    trace = QueryTrace()

    assert header.budget(2) < header.threshold
    assert not connected(label_set, 0, 3, [(1, 2), (4, 5)], QueryEngine.FAST, trace)
    assert trace.budgets
    assert all(budget <= header.budget(2) for budget in trace.budgets)
    assert all(size <= 2 for size in trace.cut_sizes)


def test_randomized_budget_is_fixed() -> None:
    graph = Graph(n=5, edges=((0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)))
    label_set = build_labels(graph, make_config(f=3, mode="randomized", seed=5))
    trace = QueryTrace()

    assert label_set.header.mode is HierarchyMode.RANDOMIZED
    assert connected(label_set, 1, 3, [(1, 2), (2, 3)], QueryEngine.BASIC, trace)
    assert set(trace.budgets) == {label_set.header.threshold}


def test_fragment_table_single_fault(ring_construction: Construction) -> None:
    label_set = ring_construction.label_set
    fault = label_set.edge_label(2, 3)
    s, t = label_set.vertex_label(0), label_set.vertex_label(4)

    table = build_fragment_table(label_set.header, [fault], s, t)

    assert table.fragment_count == 2
    assert table.root == 1
    assert table.cutsets == (1, 1)
    assert table.parents == (1,)
    assert table.intervals == ((fault.lower.start, fault.lower.end),)
    assert table.syndromes[0] == table.syndromes[1] == fault.syndromes


def test_fragment_table_nested_faults() -> None:
    label_set = build_labels(path_graph(5), make_config(f=3))
    faults = [label_set.edge_label(3, 4), label_set.edge_label(1, 2)]

    table = build_fragment_table(
        label_set.header, faults, label_set.vertex_label(0), label_set.vertex_label(4)
    )

    assert table.intervals == ((2, 5), (4, 5))
    assert table.parents == (2, 0)
    assert table.cutsets == (0b11, 0b10, 0b01)
    assert [table.locate(position) for position in range(5)] == [2, 2, 0, 0, 1]
    assert (table.s_fragment, table.t_fragment) == (2, 1)
    assert not table.immediate


def test_fragment_cutsets_count_every_fault_twice(
    constructions: List[Tuple[Graph, Construction]], rng: random.Random
) -> None:
    for graph, construction in constructions:
        label_set = construction.label_set
        faults = random_faults(rng, graph, label_set.header.f)
        table = build_fragment_table(
            label_set.header,
            [label_set.edge_label(u, v) for u, v in faults],
            label_set.vertex_label(0),
            label_set.vertex_label(graph.n - 1),
        )

        assert sum(popcount(cutset) for cutset in table.cutsets) == 2 * len(faults)


def test_fragment_syndromes_are_fragment_sums(
    constructions: List[Tuple[Graph, Construction]], rng: random.Random
) -> None:
    """Each fragment syndrome equals the sum of the vertex labels inside the fragment"""
    for graph, construction in constructions:
        label_set = construction.label_set
        t = construction.aux.t
        faults = random_faults(rng, graph, label_set.header.f)
        table = build_fragment_table(
            label_set.header,
            [label_set.edge_label(u, v) for u, v in faults],
            label_set.vertex_label(0),
            label_set.vertex_label(0),
        )

        for fragment in range(table.fragment_count):
            members = [v for v in range(t.n) if table.locate(t.preorder[v]) == fragment]
            for level, syndrome in enumerate(table.syndromes[fragment]):
                value = 0
                for v in members:
                    value ^= construction.vertex_syndromes[level][v].value
                assert syndrome.value == value


def test_same_fragment_is_immediate(ring_construction: Construction) -> None:
    label_set = ring_construction.label_set
    trace = QueryTrace()

    assert connected(label_set, 0, 1, [(3, 4), (6, 7)], QueryEngine.FAST, trace)
    assert trace.budgets == []


@pytest.mark.parametrize(
    argnames="faults,error",
    argvalues=(
        argvalues := [
            ([(0, 1), (1, 2)], FaultBudgetError),
            ([(0, 1), (1, 0)], FaultBudgetError),
            ([(0, 3)], UnknownElementError),
        ]
    ),
    ids=["too many", "duplicate", "non-edge"],
)
def test_fault_set_errors(faults: List[Tuple[int, int]], error: Type[FaultSetError]) -> None:
    graph = Graph(n=4, edges=((0, 1), (1, 2), (2, 3), (0, 2)))
    label_set = build_labels(graph, make_config(f=1))

    with pytest.raises(error):
        connected(label_set, 0, 3, faults)


def test_duplicate_fault_within_budget() -> None:
    label_set = build_labels(K3, make_config(f=2))

    with pytest.raises(FaultSetError, match="repeats"):
        connected(label_set, 0, 1, [(0, 1), (1, 0)])


@pytest.mark.parametrize("vertex", [3, -1])
def test_unknown_vertex(k3_construction: Construction, vertex: int) -> None:
    """Subdivision vertices carry no label of their own"""
    with pytest.raises(UnknownElementError):
        connected(k3_construction.label_set, 0, vertex, [])


def test_labels_from_another_set(
    k3_construction: Construction, ring_construction: Construction
) -> None:
    k3 = k3_construction.label_set
    ring = ring_construction.label_set

    with pytest.raises(LabelMismatchError):
        query_basic(
            k3.header, k3.vertex_label(0), k3.vertex_label(1), [ring.edge_label(0, 1)]
        )


def test_outdetect_query_zero() -> None:
    header = SchemeHeader(
        n=4, m=4, f=1, q=3, w=8, threshold=1, h=1, mode=HierarchyMode.RANDOMIZED, c_net=5
    )
    zero = OutdetectSyndrome.zero(1, 8)

    assert outdetect_query(header, header.make_codec(), [zero, zero], 0b1) is None


def test_outdetect_query_overflow() -> None:
    header = SchemeHeader(
        n=4, m=4, f=1, q=3, w=8, threshold=1, h=1, mode=HierarchyMode.RANDOMIZED, c_net=5
    )
    codec = RSCodec(field_for_width(8))
    first = codec.row_syndrome(EdgeLocator.from_positions(0, 2, 3), 1)
    second = codec.row_syndrome(EdgeLocator.from_positions(1, 3, 3), 1)
    syndromes = [first + second, OutdetectSyndrome.zero(1, 8)]

    with pytest.raises(DecoderOverflowError):
        outdetect_query(header, header.make_codec(), syndromes, 0b1)


def test_outdetect_query_returns_smallest_locator() -> None:
    header = SchemeHeader(
        n=4, m=4, f=1, q=3, w=8, threshold=2, h=1, mode=HierarchyMode.RANDOMIZED, c_net=5
    )
    codec = header.make_codec()
    locators = [EdgeLocator.from_positions(1, 3, 3), EdgeLocator.from_positions(0, 2, 3)]
    syndrome = codec.row_syndrome(locators[0], 2) + codec.row_syndrome(locators[1], 2)
    trace = QueryTrace()

    found = outdetect_query(
        header, codec, [syndrome, OutdetectSyndrome.zero(2, 8)], 0b1, trace
    )

    assert found == min(locators)
    assert trace.budgets == [2]
    assert trace.cut_sizes == [1]


def test_disjoint_set() -> None:
    components = DisjointSet(5)

    assert components.merge(0, 1) == components.find(1)
    components.merge(3, 4)
    components.merge(1, 4)

    assert len({components.find(x) for x in range(5)}) == 2
    assert components.find(0) == components.find(3)
    assert components.find(2) == 2
