"""
Binary label store.

All integers are big-endian.

    magic "FTCL", u16 version
    u32 n, u32 m, u32 f, u8 q, u8 w, u32 K, u32 h, u8 mode, u32 c_net[, u64 seed]
    m × (u32 u, u32 v)                                  edge table
    (h + 1) × (u32 count, count × u32 edge index)      hierarchy levels
    n × ⌈2q/8⌉ bytes                                    vertex labels: start·2^q + end
    m × (⌈4q/8⌉ bytes, (h + 1)·2K·(w/8) bytes)          edge labels: upper·2^(2q) + lower, syndromes

The seed is present for randomized stores only.
"""

import logging
import struct
from os import PathLike
from typing import List, Tuple, Union

from .ancestry import AncestryLabel, ancestry_width
from .config import HierarchyMode
from .exceptions import LabelMismatchError, StoreFormatError
from .gf2e import shipped_moduli
from .graph import Graph
from .outdetect import OutdetectSyndrome
from .scheme import EdgeLabel, LabelSet, SchemeHeader, VertexLabel
from .utils import bits_to_bytes

logger = logging.getLogger(__name__)

MAGIC = b"FTCL"
VERSION = 1

_PREAMBLE = struct.Struct(">4sH")
_HEADER = struct.Struct(">IIIBBIIBI")
_SEED = struct.Struct(">Q")
_U32 = struct.Struct(">I")
_EDGE = struct.Struct(">II")

_MODES = (HierarchyMode.DETERMINISTIC, HierarchyMode.RANDOMIZED)


def dump_store(label_set: LabelSet) -> bytes:
    """Serialize a label set."""
    header = label_set.header
    q = header.q
    parts = [
        _PREAMBLE.pack(MAGIC, VERSION),
        _HEADER.pack(
            header.n,
            header.m,
            header.f,
            q,
            header.w,
            header.threshold,
            header.h,
            _MODES.index(header.mode),
            header.c_net,
        ),
    ]
    if header.mode is HierarchyMode.RANDOMIZED:
        assert header.seed is not None, "randomized label sets record their seed"
        parts.append(_SEED.pack(header.seed))

    parts.extend(_EDGE.pack(u, v) for u, v in label_set.edges)
    for level in label_set.levels:
        parts.append(_U32.pack(len(level)))
        parts.extend(_U32.pack(index) for index in level)

    parts.extend(label.ancestry.to_bytes(q) for label in label_set.vertex_labels)

    endpoint_bytes = bits_to_bytes(4 * q)
    for label in label_set.edge_labels:
        endpoints = (label.upper.to_int(q) << (2 * q)) | label.lower.to_int(q)
        parts.append(endpoints.to_bytes(endpoint_bytes, "big"))
        parts.extend(syndrome.coords_bytes() for syndrome in label.syndromes)

    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.offset = 0

    def take(self, size: int) -> bytes:
        if self.offset + size > len(self.data):
            raise StoreFormatError(
                f"store is truncated: needed {size} bytes at offset {self.offset}, "
                f"{len(self.data) - self.offset} left"
            )
        chunk = self.data[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, layout: struct.Struct) -> Tuple[int, ...]:
        return layout.unpack(self.take(layout.size))


def load_store(data: bytes) -> LabelSet:
    """
    Deserialize a label set.

    Besides the magic, version, mode and exact length, the contents are checked: edge endpoints,
    nested hierarchy levels ending in an empty one, and ancestry intervals within the tree.
    """
    reader = _Reader(data)
    magic, version = reader.unpack(_PREAMBLE)
    if magic != MAGIC:
        raise StoreFormatError(f"not a label store: bad magic {magic!r}")
    if version != VERSION:
        raise StoreFormatError(f"unsupported store version {version}; expected {VERSION}")

    n, m, f, q, w, threshold, h, mode_code, c_net = reader.unpack(_HEADER)
    if mode_code >= len(_MODES):
        raise StoreFormatError(f"unknown hierarchy mode code {mode_code}")
    mode = _MODES[mode_code]
    seed = reader.unpack(_SEED)[0] if mode is HierarchyMode.RANDOMIZED else None
    if w not in shipped_moduli():
        raise StoreFormatError(f"field width {w} is not one of the shipped fields")
    if n == 0 or m < n - 1:
        raise StoreFormatError(f"a connected graph cannot have n={n} and m={m}")

    header = SchemeHeader(
        n=n, m=m, f=f, q=q, w=w, threshold=threshold, h=h, mode=mode, c_net=c_net, seed=seed
    )

    edges = tuple(reader.unpack(_EDGE) for _ in range(m))
    levels: List[Tuple[int, ...]] = []
    for _ in range(h + 1):
        (count,) = reader.unpack(_U32)
        levels.append(tuple(reader.unpack(_U32)[0] for _ in range(count)))

    vertex_bytes = bits_to_bytes(2 * q)
    vertex_labels = tuple(
        VertexLabel(ancestry=AncestryLabel.from_bytes(reader.take(vertex_bytes), q))
        for _ in range(n)
    )

    endpoint_bytes = bits_to_bytes(4 * q)
    syndrome_bytes = 2 * threshold * (w // 8)
    edge_labels = []
    for _ in range(m):
        endpoints = int.from_bytes(reader.take(endpoint_bytes), "big")
        edge_labels.append(
            EdgeLabel(
                upper=AncestryLabel.from_int(endpoints >> (2 * q), q),
                lower=AncestryLabel.from_int(endpoints & ((1 << (2 * q)) - 1), q),
                syndromes=tuple(
                    OutdetectSyndrome.from_coords_bytes(reader.take(syndrome_bytes), threshold, w)
                    for _ in range(h + 1)
                ),
            )
        )

    if reader.offset != len(data):
        raise StoreFormatError(
            f"store has {len(data) - reader.offset} trailing bytes after the last edge label"
        )

    label_set = LabelSet(
        header=header,
        edges=tuple((u, v) for u, v in edges),
        levels=tuple(levels),
        vertex_labels=vertex_labels,
        edge_labels=tuple(edge_labels),
    )
    _check_contents(label_set)

    logger.debug("Loaded label store: n=%d, m=%d, f=%d, K=%d, h=%d", n, m, f, threshold, h)

    return label_set


def _check_contents(label_set: LabelSet) -> None:
    header = label_set.header
    if header.q != ancestry_width(header.n_prime):
        raise StoreFormatError(
            f"ancestry width {header.q} does not fit a tree on {header.n_prime} vertices"
        )

    if len(set(label_set.edges)) != header.m:
        raise StoreFormatError("edge table lists an edge twice")
    for u, v in label_set.edges:
        if not u < v < header.n:
            raise StoreFormatError(
                f"edge table entry ({u}, {v}) is not an edge on {header.n} vertices"
            )

    previous = set(range(header.m))
    for i, level in enumerate(label_set.levels):
        if list(level) != sorted(set(level)) or not previous.issuperset(level):
            raise StoreFormatError(
                f"hierarchy level {i} is not a sorted subset of the edges of level {i - 1}"
                if i
                else "hierarchy level 0 is not a sorted set of edge indices"
            )
        previous = set(level)
    if label_set.levels[-1]:
        raise StoreFormatError("the last hierarchy level is not empty")

    try:
        for vertex_label in label_set.vertex_labels:
            header.check_vertex_label(vertex_label)
        for edge_label in label_set.edge_labels:
            header.check_edge_label(edge_label)
    except LabelMismatchError as error:
        raise StoreFormatError(f"store holds an invalid label: {error.details_text}") from error


def write_store(label_set: LabelSet, path: Union[str, PathLike]) -> int:
    """Write a label set to a file and return the number of bytes written."""
    data = dump_store(label_set)
    with open(path, "wb") as file_:
        file_.write(data)
    return len(data)


def read_store(path: Union[str, PathLike]) -> LabelSet:
    try:
        with open(path, "rb") as file_:
            return load_store(file_.read())
    except OSError as error:
        raise StoreFormatError(f"unable to read label store: {error}") from error


def check_graph(label_set: LabelSet, graph: Graph) -> None:
    """Raise a LabelMismatchError unless the label set was built for this graph."""
    if (label_set.header.n, label_set.edges) != (graph.n, graph.edges):
        raise LabelMismatchError(
            f"label store was built for a graph with n={label_set.header.n}, "
            f"m={label_set.header.m}, not for this graph (n={graph.n}, m={graph.m})"
        )
