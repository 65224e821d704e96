"""Fragments of the spanning tree after removing the queried faults."""

from bisect import bisect_right
from dataclasses import dataclass, replace
from typing import Iterable, List, Tuple

from .exceptions import FaultBudgetError, FaultSetError
from .outdetect import OutdetectSyndrome
from .scheme import EdgeLabel, SchemeHeader, VertexLabel


class DisjointSet:
    """
    Disjoint sets over the elements 0..size-1 with union by rank and path compression.

    Examples:
        >>> ds = DisjointSet(3)
        >>> ds.merge(0, 2)
        0
        >>> ds.find(2) == ds.find(0) != ds.find(1)
        True
    """

    def __init__(self, size: int) -> None:
        assert size >= 0
        self._parent = list(range(size))
        self._rank = [0] * size

    def find(self, x: int) -> int:
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def merge(self, x: int, y: int) -> int:
        """Merge the sets containing x and y and return the representative of the union."""
        x_root, y_root = self.find(x), self.find(y)
        if x_root == y_root:
            return x_root
        if self._rank[x_root] < self._rank[y_root]:
            x_root, y_root = y_root, x_root
        self._parent[y_root] = x_root
        if self._rank[x_root] == self._rank[y_root]:
            self._rank[x_root] += 1
        return x_root


@dataclass(frozen=True)
class FragmentTable:
    """
    The fragments of T′ − F.

    Faults are numbered 0..|F|-1 in preorder of their lower endpoints, and fragment i is the part
    of the subtree below fault i that lies below no other fault. The fragment holding the root has
    the id |F|.

    intervals:  preorder interval of the lower endpoint of every fault.
    parents:    fragment id of the innermost fault interval enclosing every fault interval.
    cutsets:    for every fragment, the bit mask over faults of its tree cutset.
    syndromes:  for every fragment, its aggregated outdetect label at every hierarchy level.
    """

    intervals: Tuple[Tuple[int, int], ...]
    parents: Tuple[int, ...]
    cutsets: Tuple[int, ...]
    syndromes: Tuple[Tuple[OutdetectSyndrome, ...], ...]
    s_fragment: int
    t_fragment: int

    @property
    def root(self) -> int:
        return len(self.intervals)

    @property
    def fragment_count(self) -> int:
        return len(self.intervals) + 1

    def locate(self, position: int) -> int:
        """Return the fragment holding the vertex with the given preorder position."""
        index = bisect_right(self.intervals, (position, float("inf"))) - 1
        while index != self.root and index >= 0:
            start, end = self.intervals[index]
            if start <= position < end:
                return index
            index = self.parents[index]
        return self.root

    @property
    def immediate(self) -> bool:
        """Whether s and t share a fragment, so that no fault separates them."""
        return self.s_fragment == self.t_fragment


def build_fragment_table(
    header: SchemeHeader,
    fault_labels: Iterable[EdgeLabel],
    s_label: VertexLabel,
    t_label: VertexLabel,
) -> FragmentTable:
    """
    Determine the fragments of T′ − F from the labels of F, with their cutsets and syndromes.

    A fragment's syndrome is the sum of the subtree aggregates stored with the faults of its
    cutset: the subtree of its own fault minus the subtrees of the faults directly below it.
    """
    faults = sorted(fault_labels, key=lambda label: (label.lower.start, -label.lower.end))
    if len(faults) > header.f:
        raise FaultBudgetError(
            f"{len(faults)} faults exceed the fault budget f={header.f} of the label set"
        )
    for label in faults:
        header.check_edge_label(label)
    for previous, label in zip(faults, faults[1:]):
        if previous.lower == label.lower:
            raise FaultSetError(f"fault set repeats the edge with lower endpoint {label.lower}")
    header.check_vertex_label(s_label)
    header.check_vertex_label(t_label)

    root = len(faults)
    intervals = tuple((label.lower.start, label.lower.end) for label in faults)
    parents: List[int] = []
    cutsets = [0] * (root + 1)
    stack: List[int] = []
    for index, (start, _) in enumerate(intervals):
        while stack and intervals[stack[-1]][1] <= start:
            stack.pop()
        parent = stack[-1] if stack else root
        parents.append(parent)
        cutsets[index] |= 1 << index
        cutsets[parent] |= 1 << index
        stack.append(index)

    levels = header.h + 1
    syndromes = []
    for cutset in cutsets:
        values = [0] * levels
        for index, label in enumerate(faults):
            if cutset >> index & 1:
                for level, syndrome in enumerate(label.syndromes):
                    values[level] ^= syndrome.value
        syndromes.append(
            tuple(
                OutdetectSyndrome(k=header.threshold, w=header.w, value=value)
                for value in values
            )
        )

    table = FragmentTable(
        intervals=intervals,
        parents=tuple(parents),
        cutsets=tuple(cutsets),
        syndromes=tuple(syndromes),
        s_fragment=-1,
        t_fragment=-1,
    )
    return replace(
        table,
        s_fragment=table.locate(s_label.position),
        t_fragment=table.locate(t_label.position),
    )
