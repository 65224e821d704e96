from .config import HierarchyMode, SchemeConfig, load_config, make_config
from .graph import Graph, load_graph, load_graph_file, oracle_connected
from .query import QueryEngine, QueryTrace, connected, query_basic, query_fast
from .scheme import EdgeLabel, LabelSet, VertexLabel, build_labels, construct
from .store import dump_store, load_store, read_store, write_store

__all__ = [
    "EdgeLabel",
    "Graph",
    "HierarchyMode",
    "LabelSet",
    "QueryEngine",
    "QueryTrace",
    "SchemeConfig",
    "VertexLabel",
    "build_labels",
    "connected",
    "construct",
    "dump_store",
    "load_config",
    "load_graph",
    "load_graph_file",
    "load_store",
    "make_config",
    "oracle_connected",
    "query_basic",
    "query_fast",
    "read_store",
    "write_store",
]
