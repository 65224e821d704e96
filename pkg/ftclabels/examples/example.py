"""
Build fault-tolerant connectivity labels for the Petersen graph from the example config file, then
answer a few queries from the labels alone and compare them with graph search.
"""

from itertools import combinations
from pathlib import Path

from ftclabels import (
    QueryEngine,
    build_labels,
    connected,
    load_config,
    load_graph_file,
    oracle_connected,
)
from ftclabels import examples

EXAMPLES_DIR = Path(examples.__file__).parent

config = load_config(EXAMPLES_DIR / "config.toml")
graph = load_graph_file(EXAMPLES_DIR / "petersen.txt")
label_set = build_labels(graph, config)

header = label_set.header
print(f"vertex labels: {header.vertex_label_bits} bits")
print(f"edge labels: {header.edge_label_bits} bits (h={header.h}, K={header.threshold})")

# The Petersen graph is 3-edge-connected, so removing two edges never disconnects it, but removing
# the three edges around a vertex isolates it. With f=2 only the former can be asked.
for faults in combinations(graph.edges[:6], 2):
    for s, t in [(0, 3), (2, 9)]:
        answer = connected(label_set, s, t, faults, QueryEngine.FAST)
        assert answer == oracle_connected(graph, s, t, faults)
        print(f"{s} ~ {t} without {list(faults)}: {'connected' if answer else 'disconnected'}")
