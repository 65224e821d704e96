"""Cross-check of label queries against graph search on the original graph."""

import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from .graph import Edge, Graph, build_spanning_tree, oracle_connected
from .query import QueryEngine, QueryTrace, connected
from .scheme import LabelSet
from .store import check_graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Trial:
    index: int
    kind: str
    s: int
    t: int
    faults: Tuple[Edge, ...]


@dataclass(frozen=True)
class TrialResult:
    trial: Trial
    expected: bool
    basic: bool
    fast: bool
    seconds: float
    merges: int

    @property
    def ok(self) -> bool:
        return self.expected == self.basic == self.fast


@dataclass
class VerifyReport:
    trials: int = 0
    mismatches: List[TrialResult] = field(default_factory=list)
    timings: List[float] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def percentile(self, fraction: float) -> float:
        if not self.timings:
            return 0.0
        ordered = sorted(self.timings)
        return ordered[min(len(ordered) - 1, int(fraction * len(ordered)))]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trials": self.trials,
            "mismatches": len(self.mismatches),
            "failures": [
                {
                    "index": r.trial.index,
                    "kind": r.trial.kind,
                    "s": r.trial.s,
                    "t": r.trial.t,
                    "faults": [list(edge) for edge in r.trial.faults],
                    "expected": r.expected,
                    "basic": r.basic,
                    "fast": r.fast,
                }
                for r in self.mismatches
            ],
            "seconds": {
                "p50": self.percentile(0.5),
                "p90": self.percentile(0.9),
                "p99": self.percentile(0.99),
                "max": max(self.timings, default=0.0),
            },
        }


def generate_trials(graph: Graph, f: int, trials: int, rng: random.Random) -> List[Trial]:
    """
    Draw queries of three kinds in rotation: uniformly random faults, faults on the canonical
    spanning tree only, and faults forming a small s-t edge cut (or the whole neighborhood of a
    low-degree vertex) so that disconnected answers are frequent.
    """
    tree_edges = [
        (min(u, v), max(u, v)) for u, v in build_spanning_tree(graph).tree_edges()
    ]
    nx_graph = graph.to_networkx()
    result = []
    for index in range(trials):
        s, t = rng.randrange(graph.n), rng.randrange(graph.n)
        size = rng.randint(1, min(f, graph.m))
        kind = ("random", "tree", "cut")[index % 3]
        if kind == "random":
            faults = rng.sample(graph.edges, size)
        elif kind == "tree":
            faults = rng.sample(tree_edges, min(size, len(tree_edges)))
        else:
            faults = _cut_faults(nx_graph, graph, s, t, f, rng)
        result.append(
            Trial(index=index, kind=kind, s=s, t=t, faults=tuple(sorted(set(faults))))
        )
    return result


def _cut_faults(
    nx_graph: nx.Graph, graph: Graph, s: int, t: int, f: int, rng: random.Random
) -> List[Edge]:
    if s != t:
        cut = nx.minimum_edge_cut(nx_graph, s, t)
        if len(cut) <= f:
            return [(min(u, v), max(u, v)) for u, v in cut]
    vertex = min(range(graph.n), key=lambda v: (len(graph.adjacency[v]), rng.random()))
    incident = [(min(vertex, u), max(vertex, u)) for u in graph.adjacency[vertex]]
    return rng.sample(incident, min(f, len(incident)))


def run_trial(label_set: LabelSet, graph: Graph, trial: Trial) -> TrialResult:
    expected = oracle_connected(graph, trial.s, trial.t, trial.faults)
    trace = QueryTrace()
    start = time.perf_counter()
    fast = connected(label_set, trial.s, trial.t, trial.faults, QueryEngine.FAST, trace)
    seconds = time.perf_counter() - start
    basic = connected(label_set, trial.s, trial.t, trial.faults, QueryEngine.BASIC)
    return TrialResult(
        trial=trial,
        expected=expected,
        basic=basic,
        fast=fast,
        seconds=seconds,
        merges=trace.merges,
    )


def verify_labels(
    label_set: LabelSet,
    graph: Graph,
    trials: int,
    seed: Optional[int] = None,
    workers: int = 1,
) -> VerifyReport:
    """Run sampled queries with both engines and compare every answer with the oracle."""
    check_graph(label_set, graph)
    seed = 0 if seed is None else seed
    planned = generate_trials(graph, label_set.header.f, trials, random.Random(seed))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda t: run_trial(label_set, graph, t), planned))
    else:
        results = [run_trial(label_set, graph, trial) for trial in planned]
    results.sort(key=lambda r: r.trial.index)

    report = VerifyReport(trials=len(results))
    for result in results:
        report.timings.append(result.seconds)
        if not result.ok:
            report.mismatches.append(result)
            logger.warning(
                "Mismatch (seed %d, trial %d): s=%d t=%d faults=%s oracle=%s basic=%s fast=%s",
                seed,
                result.trial.index,
                result.trial.s,
                result.trial.t,
                list(result.trial.faults),
                result.expected,
                result.basic,
                result.fast,
            )

    logger.info("Verified %d queries, %d mismatches", report.trials, len(report.mismatches))

    return report
