"""Interval-based ancestry labels on a rooted tree."""

from dataclasses import dataclass
from typing import Literal, Tuple

from .graph import RootedTree
from .utils import bits_to_bytes, ceil_log2


@dataclass(frozen=True, order=True)
class AncestryLabel:
    """
    Half-open preorder interval [start, end) covering exactly the subtree of a vertex.

    Labels are serialized as two q-bit fields, start first; q is recorded once per label set.
    """

    start: int
    end: int

    def contains_position(self, position: int) -> bool:
        return self.start <= position < self.end

    def to_int(self, q: int) -> int:
        return (self.start << q) | self.end

    @classmethod
    def from_int(cls, value: int, q: int) -> "AncestryLabel":
        return cls(start=value >> q, end=value & ((1 << q) - 1))

    def to_bytes(self, q: int) -> bytes:
        return self.to_int(q).to_bytes(bits_to_bytes(2 * q), "big")

    @classmethod
    def from_bytes(cls, data: bytes, q: int) -> "AncestryLabel":
        return cls.from_int(int.from_bytes(data, "big"), q)


def ancestry_width(n: int) -> int:
    """Return q = ⌈log2(n + 1)⌉, the width of one interval field for a tree on n vertices."""
    return ceil_log2(n + 1)


def assign_ancestry(t: RootedTree) -> Tuple[AncestryLabel, ...]:
    """Assign every vertex of t the preorder interval of its subtree."""
    return tuple(
        AncestryLabel(start=t.preorder[v], end=t.preorder[v] + t.size[v])
        for v in range(t.n)
    )


def ancestry_decode(a: AncestryLabel, b: AncestryLabel) -> Literal[-1, 0, 1]:
    """
    Return 1 if a labels a proper ancestor of b, -1 if b labels a proper ancestor of a, and 0
    otherwise (including a == b).
    """
    if a == b:
        return 0
    if a.start <= b.start and b.end <= a.end:
        return 1
    if b.start <= a.start and a.end <= b.end:
        return -1
    return 0
