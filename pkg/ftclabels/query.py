"""
Connectivity queries.

Both engines start from the fragments of T′ − F and repeatedly ask the outdetect labels of a
union of fragments S for an edge leaving S. Since every such S has a tree cutset inside F, the
hierarchy guarantees that the scan over the levels finds a decodable level whenever S has an
outgoing edge at all.
"""

import heapq
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .exceptions import DecoderOverflowError
from .fragments import DisjointSet, FragmentTable, build_fragment_table
from .outdetect import (
    DecodeStats,
    DecodeStatus,
    EdgeLocator,
    OutdetectSyndrome,
    RSCodec,
    prefix,
)
from .scheme import EdgeLabel, LabelSet, SchemeHeader, VertexLabel
from .utils import popcount

logger = logging.getLogger(__name__)


class QueryEngine(str, Enum):
    BASIC = "basic"
    FAST = "fast"


@dataclass
class QueryTrace:
    """
    Instrumentation of one query.

    budgets:     decode threshold k′ of every outdetect call.
    cut_sizes:   tree cutset size of the vertex set of every outdetect call.
    components:  fragment ids and tree cutset mask of the vertex set of every outdetect call.
    heap_ops:    live pops and pushes of the fast engine's heap.
    """

    budgets: List[int] = field(default_factory=list)
    cut_sizes: List[int] = field(default_factory=list)
    merges: int = 0
    discards: int = 0
    heap_ops: int = 0
    components: List[Tuple[FrozenSet[int], int]] = field(default_factory=list)
    decode: DecodeStats = field(default_factory=DecodeStats)


def _merge_syndromes(
    a: Sequence[OutdetectSyndrome], b: Sequence[OutdetectSyndrome]
) -> Tuple[OutdetectSyndrome, ...]:
    return tuple(x + y for x, y in zip(a, b))


def outdetect_query(
    header: SchemeHeader,
    codec: RSCodec,
    syndromes: Sequence[OutdetectSyndrome],
    cutset: int,
    trace: Optional[QueryTrace] = None,
) -> Optional[EdgeLocator]:
    """
    Find an edge leaving the vertex set with the given per-level syndromes and tree cutset mask.

    Levels are scanned from the sparsest down; the first level with a nonzero syndrome prefix is
    decoded. Returns the smallest recovered locator, or None when every prefix is zero.
    """
    cut_size = popcount(cutset)
    k_prime = header.budget(cut_size)
    if trace is not None:
        trace.budgets.append(k_prime)
        trace.cut_sizes.append(cut_size)

    for level in range(header.h - 1, -1, -1):
        if prefix(syndromes[level], k_prime).is_zero():
            continue
        result = codec.syndrome_decode(
            syndromes[level], k_prime, trace.decode if trace is not None else None
        )
        if result.status is DecodeStatus.EDGES:
            return min(result.locators)
        raise DecoderOverflowError(
            f"level {level} syndrome of a set with tree cutset {cut_size} did not decode within "
            f"threshold {k_prime}; the hierarchy does not cover this set"
        )
    return None


def _reached_fragment(
    table: FragmentTable, header: SchemeHeader, loc: EdgeLocator, inside: Set[int]
) -> int:
    """Return the fragment of the endpoint of loc outside the set of fragments `inside`."""
    ends = [table.locate(position) for position in loc.positions(header.q)]
    outside = [fragment for fragment in ends if fragment not in inside]
    if len(outside) != 1:
        raise DecoderOverflowError(
            f"decoded edge {loc.element:#x} does not leave the current vertex set"
        )
    return outside[0]


def query_basic(
    header: SchemeHeader,
    s_label: VertexLabel,
    t_label: VertexLabel,
    fault_labels: Iterable[EdgeLabel],
    codec: Optional[RSCodec] = None,
    trace: Optional[QueryTrace] = None,
) -> bool:
    """Grow the component of s one fragment at a time until it reaches t or has no outgoing edge."""
    table = build_fragment_table(header, fault_labels, s_label, t_label)
    if table.immediate:
        return True
    codec = codec or header.make_codec()

    inside = {table.s_fragment}
    cutset = table.cutsets[table.s_fragment]
    syndromes: Tuple[OutdetectSyndrome, ...] = table.syndromes[table.s_fragment]
    while True:
        if trace is not None:
            trace.components.append((frozenset(inside), cutset))
        loc = outdetect_query(header, codec, syndromes, cutset, trace)
        if loc is None:
            return False
        reached = _reached_fragment(table, header, loc, inside)
        if reached == table.t_fragment:
            return True
        inside.add(reached)
        cutset ^= table.cutsets[reached]
        syndromes = _merge_syndromes(syndromes, table.syndromes[reached])
        if trace is not None:
            trace.merges += 1


def query_fast(
    header: SchemeHeader,
    s_label: VertexLabel,
    t_label: VertexLabel,
    fault_labels: Iterable[EdgeLabel],
    codec: Optional[RSCodec] = None,
    trace: Optional[QueryTrace] = None,
) -> bool:
    """
    Grow all components at once, always working on the component with the smallest tree cutset.

    A component without an outgoing edge is a whole connected component of G − F: if it holds s
    or t the answer is False, otherwise it is dropped. Otherwise it is merged with the component
    across the recovered edge.
    """
    table = build_fragment_table(header, fault_labels, s_label, t_label)
    if table.immediate:
        return True
    codec = codec or header.make_codec()

    count = table.fragment_count
    components = DisjointSet(count)
    cutsets = list(table.cutsets)
    syndromes = list(table.syndromes)
    members: List[Set[int]] = [{fragment} for fragment in range(count)]
    version = [0] * count
    alive = [True] * count

    heap = [(popcount(cutsets[i]), i, 0) for i in range(count)]
    heapq.heapify(heap)

    def push(component: int) -> None:
        version[component] += 1
        heapq.heappush(heap, (popcount(cutsets[component]), component, version[component]))
        if trace is not None:
            trace.heap_ops += 1

    while heap:
        _, component, stamp = heapq.heappop(heap)
        if not alive[component] or stamp != version[component]:
            continue
        if trace is not None:
            trace.heap_ops += 1
            trace.components.append((frozenset(members[component]), cutsets[component]))

        loc = outdetect_query(header, codec, syndromes[component], cutsets[component], trace)
        if loc is None:
            if table.s_fragment in members[component] or table.t_fragment in members[component]:
                return False
            alive[component] = False
            if trace is not None:
                trace.discards += 1
            continue

        other = components.find(_reached_fragment(table, header, loc, members[component]))
        merged = components.merge(component, other)
        absorbed = other if merged == component else component
        alive[absorbed] = False
        cutsets[merged] = cutsets[component] ^ cutsets[other]
        syndromes[merged] = _merge_syndromes(syndromes[component], syndromes[other])
        members[merged] = members[component] | members[other]
        if trace is not None:
            trace.merges += 1

        if table.s_fragment in members[merged] and table.t_fragment in members[merged]:
            return True
        push(merged)

    return False


def connected(
    label_set: LabelSet,
    s: int,
    t: int,
    faults: Iterable[Tuple[int, int]],
    engine: QueryEngine = QueryEngine.FAST,
    trace: Optional[QueryTrace] = None,
) -> bool:
    """Answer whether s and t are connected in G − F, reading only the labels of s, t and F."""
    s_label = label_set.vertex_label(s)
    t_label = label_set.vertex_label(t)
    fault_labels = [label_set.edge_label(u, v) for u, v in faults]
    query = query_fast if engine is QueryEngine.FAST else query_basic
    return query(
        label_set.header, s_label, t_label, fault_labels, label_set.codec, trace
    )
