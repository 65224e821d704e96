"""Command-line interface: build, query, verify, stats and hierarchy-dump."""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Sequence

import orjson

from .config import HierarchyMode, load_config
from .exceptions import ConfigError, FTCException
from .graph import Edge, load_graph_file
from .query import QueryEngine, QueryTrace, connected
from .scheme import LabelSet, build_labels
from .store import read_store, write_store
from .utils import ceil_log2
from .verify import verify_labels

logger = logging.getLogger(__name__)

STORE_SUFFIX = ".ftcl"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise ConfigError(message)


def _emit(args: argparse.Namespace, report: Dict[str, Any], lines: Sequence[str]) -> None:
    if args.json:
        sys.stdout.write(orjson.dumps(report, option=orjson.OPT_INDENT_2).decode() + "\n")
    else:
        sys.stdout.write("".join(f"{line}\n" for line in lines))


def parse_faults(text: Optional[str]) -> List[Edge]:
    """Parse a comma-separated list of "u-v" vertex pairs."""
    if not text:
        return []
    faults = []
    for item in text.split(","):
        try:
            u, v = (int(part) for part in item.strip().split("-"))
        except ValueError:
            raise ConfigError(f"fault {item!r} is not of the form 'u-v'") from None
        faults.append((u, v))
    return faults


def _size_report(label_set: LabelSet) -> Dict[str, Any]:
    header = label_set.header
    return {
        "n": header.n,
        "m": header.m,
        "f": header.f,
        "mode": header.mode.value,
        "seed": header.seed,
        "q": header.q,
        "w": header.w,
        "K": header.threshold,
        "h": header.h,
        "c_net": header.c_net,
        "level_sizes": [len(level) for level in label_set.levels],
        "vertex_label_bits": header.vertex_label_bits,
        "edge_label_bits": header.edge_label_bits,
        # edge label bits per f²·⌈log2 n′⌉³
        "size_ratio": header.edge_label_bits
        / (header.f**2 * max(1, ceil_log2(header.n_prime)) ** 3),
    }


def cmd_build(args: argparse.Namespace) -> int:
    config = load_config(
        args.config, mode=args.mode, f=args.f, c_net=args.c_net, seed=args.seed
    )
    graph = load_graph_file(args.graph)

    start = time.perf_counter()
    label_set = build_labels(graph, config)
    seconds = time.perf_counter() - start

    out = Path(args.out) if args.out else Path(args.graph).with_suffix(STORE_SUFFIX)
    size = write_store(label_set, out)

    report = {**_size_report(label_set), "store": str(out), "bytes": size, "seconds": seconds}
    header = label_set.header
    lines = [
        f"wrote {out} ({size} bytes) in {seconds:.2f}s",
        f"vertex label: {header.vertex_label_bits} bits",
        f"edge label: {header.edge_label_bits} bits",
        f"hierarchy depth h={header.h}, K={header.threshold}",
    ]
    if header.mode is HierarchyMode.RANDOMIZED:
        lines.append(f"seed: {header.seed}")
    _emit(args, report, lines)
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    label_set = read_store(args.store)
    faults = parse_faults(args.faults)
    trace = QueryTrace()
    answer = connected(label_set, args.s, args.t, faults, QueryEngine(args.engine), trace)
    verdict = "connected" if answer else "disconnected"
    report = {
        "s": args.s,
        "t": args.t,
        "faults": [list(edge) for edge in faults],
        "engine": args.engine,
        "connected": answer,
        "merges": trace.merges,
        "budgets": trace.budgets,
    }
    _emit(args, report, [verdict])
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    graph = load_graph_file(args.graph)
    label_set = read_store(args.store)
    report = verify_labels(label_set, graph, args.trials, seed=args.seed, workers=args.workers)
    data = report.to_dict()
    seconds = data["seconds"]
    lines = [
        f"trials: {report.trials}",
        f"mismatches: {len(report.mismatches)}",
        f"query seconds: p50={seconds['p50']:.6f} p90={seconds['p90']:.6f} "
        f"p99={seconds['p99']:.6f} max={seconds['max']:.6f}",
    ]
    _emit(args, data, lines)
    return 0 if report.ok else 3


def cmd_stats(args: argparse.Namespace) -> int:
    label_set = read_store(args.store)
    report = _size_report(label_set)
    lines = [f"{key}: {value}" for key, value in report.items() if value is not None]
    _emit(args, report, lines)
    return 0


def cmd_hierarchy_dump(args: argparse.Namespace) -> int:
    """
    Print one line per level: "level i (|E_i|): e1 e2 ...", listing original edge indices with the
    edge in parentheses.
    """
    label_set = read_store(args.store)
    report = {
        "K": label_set.header.threshold,
        "levels": [list(level) for level in label_set.levels],
    }
    lines = [
        f"level {i} ({len(level)}): "
        + " ".join(f"{e}({label_set.edges[e][0]}-{label_set.edges[e][1]})" for e in level)
        for i, level in enumerate(label_set.levels)
    ]
    _emit(args, report, lines)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ftclabels", description="Fault-tolerant connectivity labels for graphs."
    )
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--json", action="store_true", help="write reports as JSON")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    build = subparsers.add_parser(
        "build", parents=[common], help="build the label store of a graph"
    )
    build.add_argument("graph", help="edge-list document")
    build.add_argument("--out", help=f"store path (default: graph path with {STORE_SUFFIX})")
    build.add_argument("--config", type=argparse.FileType("rb"), help="TOML config file")
    build.add_argument("--mode", choices=[mode.value for mode in HierarchyMode])
    build.add_argument("--f", type=int, help="fault budget")
    build.add_argument("--c-net", dest="c_net", type=int)
    build.add_argument("--seed", type=int, help="seed of the randomized hierarchy")
    build.set_defaults(handler=cmd_build)

    query = subparsers.add_parser(
        "query", parents=[common], help="decide s-t connectivity under faults"
    )
    query.add_argument("store")
    query.add_argument("s", type=int)
    query.add_argument("t", type=int)
    query.add_argument("--faults", help="comma-separated 'u-v' edges, e.g. 0-1,2-3")
    query.add_argument(
        "--engine", choices=[engine.value for engine in QueryEngine], default="fast"
    )
    query.set_defaults(handler=cmd_query)

    verify = subparsers.add_parser(
        "verify", parents=[common], help="cross-check a store against its graph"
    )
    verify.add_argument("graph")
    verify.add_argument("store")
    verify.add_argument("--trials", type=int, default=500)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--workers", type=int, default=1)
    verify.set_defaults(handler=cmd_verify)

    stats = subparsers.add_parser(
        "stats", parents=[common], help="report label sizes and hierarchy shape"
    )
    stats.add_argument("store")
    stats.set_defaults(handler=cmd_stats)

    dump = subparsers.add_parser(
        "hierarchy-dump", parents=[common], help="list the edges of every level"
    )
    dump.add_argument("store")
    dump.set_defaults(handler=cmd_hierarchy_dump)

    return parser


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _report_error(json_output: bool, outcome: Dict[str, str]) -> None:
    if json_output:
        sys.stdout.write(orjson.dumps({"error": outcome}).decode() + "\n")
    else:
        sys.stderr.write(f"error: {outcome['details']}\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    json_output = "--json" in argv
    try:
        args = make_parser().parse_args(argv)
        _configure_logging(args.verbose)
        return int(args.handler(args))
    except FTCException as error:
        _report_error(json_output, error.outcome())
        return error.exit_code()
    except Exception as error:
        logger.exception("Unexpected error")
        _report_error(
            json_output, {"severity": "fatal", "code": "exception", "details": str(error)}
        )
        return 3
